"""
Waveform I/O

WAV reading/writing through soundfile and a read-only loader that resolves
seed utterance ids to samples.
"""

import logging
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple, Union

import numpy as np
import soundfile as sf

from ..errors import SampleRateMismatchError, SourceNotFoundError, UnsupportedEncodingError
from ..models import AudioRef, SourceUtterance

logger = logging.getLogger(__name__)

PCM16_SCALE = 32768.0
SUPPORTED_SUBTYPES = ("PCM_16", "PCM_24", "PCM_32", "FLOAT", "DOUBLE")
WRITE_SUBTYPES = ("PCM_16", "FLOAT")


def read_wav(
    path: Union[str, Path],
    channel: int = 0,
    offset: float = 0.0,
    duration: Optional[float] = None,
) -> Tuple[np.ndarray, int]:
    """
    Read one channel of a WAV file as float64 samples in [-1, 1].

    16-bit PCM is decoded as q / 32768 so that write_wav re-encodes it
    bit-exactly.

    Args:
        path: WAV file
        channel: Channel to return from multichannel files
        offset: Start of the span to read (s)
        duration: Length of the span (s); None reads to the end

    Returns:
        (samples, sample_rate)
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Audio file not found: {path}")

    info = sf.info(str(path))
    if info.subtype not in SUPPORTED_SUBTYPES:
        raise UnsupportedEncodingError(f"{path}: unsupported sample encoding {info.subtype}")
    if not 0 <= channel < info.channels:
        raise ValueError(f"{path}: channel {channel} requested but file has {info.channels}")

    start = int(round(offset * info.samplerate))
    stop = None if duration is None else start + int(round(duration * info.samplerate))
    if info.subtype == "PCM_16":
        data, rate = sf.read(str(path), start=start, stop=stop, dtype="int16", always_2d=True)
        samples = data[:, channel].astype(np.float64) / PCM16_SCALE
    else:
        data, rate = sf.read(str(path), start=start, stop=stop, dtype="float64", always_2d=True)
        samples = np.ascontiguousarray(data[:, channel])
    return samples, int(rate)


def write_wav(
    path: Union[str, Path],
    samples: np.ndarray,
    sample_rate: int,
    subtype: str = "PCM_16",
) -> Path:
    """
    Write mono samples, clamped to [-1, 1].

    PCM_16 stores round(x * 32768) clipped to the int16 range; FLOAT stores
    32-bit floats.
    """
    if subtype not in WRITE_SUBTYPES:
        raise UnsupportedEncodingError(f"Cannot write {subtype}; choose one of {', '.join(WRITE_SUBTYPES)}")
    samples = np.asarray(samples, dtype=np.float64)
    if not np.all(np.isfinite(samples)):
        raise ValueError(f"Refusing to write non-finite samples to {path}")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    clamped = np.clip(samples, -1.0, 1.0)
    if subtype == "PCM_16":
        data = np.clip(np.round(clamped * PCM16_SCALE), -32768, 32767).astype(np.int16)
    else:
        data = clamped.astype(np.float32)
    sf.write(str(path), data, sample_rate, subtype=subtype, format="WAV")
    return path


class SourceAudioLoader:
    """
    Resolves seed utterance ids (and raw audio refs) to samples.

    Whole files are cached per loader instance; each worker owns its own
    loader, so nothing is shared across processes.
    """

    def __init__(
        self,
        utterances: Iterable[SourceUtterance],
        sample_rate: int,
        base_dir: Optional[Union[str, Path]] = None,
        cache_size: int = 64,
    ):
        self.sample_rate = sample_rate
        self.base_dir = Path(base_dir) if base_dir is not None else None
        self.cache_size = cache_size
        self._utterances: Dict[str, SourceUtterance] = {u.id: u for u in utterances}
        self._cache: "OrderedDict[Path, np.ndarray]" = OrderedDict()

    def __contains__(self, source_id: str) -> bool:
        return source_id in self._utterances

    def __len__(self) -> int:
        return len(self._utterances)

    def utterance(self, source_id: str) -> SourceUtterance:
        try:
            return self._utterances[source_id]
        except KeyError:
            raise SourceNotFoundError(source_id, "not in the loaded source manifests") from None

    def text(self, source_id: str) -> Optional[str]:
        utt = self._utterances.get(source_id)
        return utt.text if utt else None

    def resolve_path(self, path: str) -> Path:
        candidate = Path(path)
        if not candidate.is_absolute() and self.base_dir is not None:
            candidate = self.base_dir / candidate
        return candidate

    def _file_samples(self, path: Path, record_id: str) -> np.ndarray:
        if path in self._cache:
            self._cache.move_to_end(path)
            return self._cache[path]
        try:
            samples, rate = read_wav(path)
        except FileNotFoundError as e:
            raise SourceNotFoundError(record_id, str(e)) from e
        if rate != self.sample_rate:
            raise SampleRateMismatchError(
                f"'{record_id}' audio {path} is {rate} Hz, expected {self.sample_rate} Hz"
            )
        self._cache[path] = samples
        if len(self._cache) > self.cache_size:
            self._cache.popitem(last=False)
        return samples

    def load_ref(self, ref: AudioRef, record_id: Optional[str] = None) -> np.ndarray:
        """Samples of an audio span; the returned array must not be modified."""
        samples = self._file_samples(self.resolve_path(ref.path), record_id or ref.path)
        start = int(round(ref.offset * self.sample_rate))
        stop = start + int(round(ref.duration * self.sample_rate))
        return samples[start:stop]

    def load(self, source_id: str) -> np.ndarray:
        utt = self.utterance(source_id)
        if utt.sample_rate != self.sample_rate:
            raise SampleRateMismatchError(
                f"'{source_id}' is declared at {utt.sample_rate} Hz, expected {self.sample_rate} Hz"
            )
        segment = self.load_ref(utt.audio, record_id=source_id)
        if segment.size == 0:
            raise SourceNotFoundError(source_id, f"span lies outside {utt.audio.path}")
        return segment
