"""
JSON-Lines Manifest I/O

Readers and writers for utterance, session and noise manifests. One record
per line; blank lines are skipped. Parse failures carry the line number,
invariant violations carry the record id.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from ..errors import ManifestParseError, ManifestValidationError, SampleRateMismatchError
from ..models import NoiseRecording, SessionManifest, SourceUtterance, SpeakerPool
from ..schemas import NoiseRecordDict, SessionRecordDict, UtteranceRecordDict

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
ModelT = TypeVar("ModelT", bound=BaseModel)


def _iter_records(path: PathLike) -> Iterator[Tuple[int, Dict[str, Any]]]:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Manifest not found: {path}")
    with path.open("r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ManifestParseError(path, line_number, f"invalid JSON ({e.msg})") from e
            if not isinstance(record, dict):
                raise ManifestParseError(path, line_number, "record is not a JSON object")
            yield line_number, record


def _validate_record(model: Type[ModelT], record: Dict[str, Any], id_field: str, path: PathLike, line_number: int) -> ModelT:
    try:
        return model.model_validate(record)
    except ValidationError as e:
        record_id = record.get(id_field)
        if not isinstance(record_id, str) or not record_id:
            raise ManifestParseError(path, line_number, f"missing or invalid '{id_field}'") from e
        reasons = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ManifestValidationError(record_id, reasons) from e


def _check_rate(record_id: str, actual: int, expected: Optional[int]) -> None:
    if expected is not None and actual != expected:
        raise SampleRateMismatchError(
            f"'{record_id}' is {actual} Hz but the configured sample rate is {expected} Hz"
        )


def load_utterances(path: PathLike, sample_rate: Optional[int] = None) -> List[SourceUtterance]:
    """Load utterance records in file order."""
    utterances: List[SourceUtterance] = []
    seen: set = set()
    for line_number, record in _iter_records(path):
        utt = _validate_record(SourceUtterance, record, "id", path, line_number)
        if utt.id in seen:
            raise ManifestValidationError(utt.id, f"duplicate utterance id (line {line_number})")
        seen.add(utt.id)
        _check_rate(utt.id, utt.sample_rate, sample_rate)
        utterances.append(utt)
    return utterances


def group_by_speaker(utterances: Iterable[SourceUtterance]) -> List[SpeakerPool]:
    """Pools in order of each speaker's first appearance."""
    grouped: Dict[str, List[SourceUtterance]] = {}
    for utt in utterances:
        grouped.setdefault(utt.speaker_id, []).append(utt)
    return [SpeakerPool(speaker_id=speaker, utterances=items) for speaker, items in grouped.items()]


def load_utterance_manifest(path: PathLike, sample_rate: Optional[int] = None) -> List[SpeakerPool]:
    """
    Load an utterance manifest grouped into speaker pools.

    Args:
        path: JSON-lines utterance manifest
        sample_rate: If given, every record must declare this rate

    Returns:
        One SpeakerPool per speaker
    """
    utterances = load_utterances(path, sample_rate=sample_rate)
    pools = group_by_speaker(utterances)
    logger.info(f"Loaded {len(utterances)} utterances from {len(pools)} speakers in {path}")
    return pools


def utterance_to_record(utt: SourceUtterance) -> UtteranceRecordDict:
    record: UtteranceRecordDict = utt.model_dump(mode="json", by_alias=True, exclude_none=True)
    return record


def session_to_record(manifest: SessionManifest) -> SessionRecordDict:
    record: SessionRecordDict = manifest.model_dump(mode="json", by_alias=True, exclude_none=True)
    return record


def _write_lines(records: Iterable[Dict[str, Any]], sink: TextIO) -> int:
    count = 0
    for record in records:
        sink.write(json.dumps(record, ensure_ascii=False) + "\n")
        count += 1
    return count


def _open_for_write(path: PathLike) -> TextIO:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path.open("w", encoding="utf-8")


def write_utterance_manifest(utterances: Iterable[SourceUtterance], path: PathLike) -> int:
    with _open_for_write(path) as f:
        count = _write_lines((utterance_to_record(u) for u in utterances), f)
    logger.debug(f"Wrote {count} utterances to {path}")
    return count


def write_session_manifests(manifests: Iterable[SessionManifest], sink: Union[PathLike, TextIO]) -> int:
    """Write session records to a path or an open text sink."""
    records = (session_to_record(m) for m in manifests)
    if isinstance(sink, (str, Path)):
        with _open_for_write(sink) as f:
            return _write_lines(records, f)
    return _write_lines(records, sink)


def load_session_manifests(path: PathLike) -> List[SessionManifest]:
    manifests = [
        _validate_record(SessionManifest, record, "session_id", path, line_number)
        for line_number, record in _iter_records(path)
    ]
    logger.debug(f"Loaded {len(manifests)} sessions from {path}")
    return manifests


def load_noise_manifest(path: PathLike, sample_rate: Optional[int] = None) -> List[NoiseRecording]:
    noises: List[NoiseRecording] = []
    for line_number, record in _iter_records(path):
        noise = _validate_record(NoiseRecording, record, "id", path, line_number)
        _check_rate(noise.id, noise.sample_rate, sample_rate)
        noises.append(noise)
    logger.info(f"Loaded {len(noises)} noise recordings from {path}")
    return noises


def noise_to_record(noise: NoiseRecording) -> NoiseRecordDict:
    record: NoiseRecordDict = noise.model_dump(mode="json")
    return record


def write_noise_manifest(noises: Sequence[NoiseRecording], path: PathLike) -> int:
    with _open_for_write(path) as f:
        return _write_lines((noise_to_record(n) for n in noises), f)


AudioRecordT = TypeVar("AudioRecordT", SourceUtterance, NoiseRecording)


def resolve_audio_paths(records: Iterable[AudioRecordT], base_dir: PathLike) -> List[AudioRecordT]:
    """Make relative audio paths absolute against `base_dir` (usually the manifest directory)."""
    base = Path(base_dir).resolve()
    resolved: List[AudioRecordT] = []
    for record in records:
        path = Path(record.audio.path)
        if not path.is_absolute():
            audio = record.audio.model_copy(update={"path": str(base / path)})
            record = record.model_copy(update={"audio": audio})
        resolved.append(record)
    return resolved


def merge_speaker_pools(*pool_sets: Sequence[SpeakerPool]) -> List[SpeakerPool]:
    """
    Combine pools from several source manifests.

    A speaker id may appear in only one manifest.
    """
    merged: List[SpeakerPool] = []
    owners: Dict[str, int] = {}
    for index, pools in enumerate(pool_sets):
        for pool in pools:
            if pool.speaker_id in owners and owners[pool.speaker_id] != index:
                raise ManifestValidationError(
                    pool.speaker_id, "speaker id appears in more than one source manifest"
                )
            owners[pool.speaker_id] = index
            merged.append(pool)
    return merged
