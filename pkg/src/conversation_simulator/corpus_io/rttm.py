"""
RTTM Reader and Writer

SPEAKER lines only:
    SPEAKER <session> 1 <onset> <duration> <NA> <NA> <speaker> <NA> <NA>
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, TextIO, Tuple, Union

from ..errors import ManifestParseError
from ..models import SessionManifest

logger = logging.getLogger(__name__)

RTTM_FIELDS = 10

Segment = Tuple[str, float, float]


def format_rttm_lines(manifest: SessionManifest) -> List[str]:
    """Lines for one session, sorted by onset then speaker id."""
    ordered = sorted(manifest.supervisions, key=lambda s: (s.onset, s.speaker_id))
    return [
        f"SPEAKER {manifest.session_id} 1 {s.onset:.3f} {s.duration:.3f} <NA> <NA> {s.speaker_id} <NA> <NA>\n"
        for s in ordered
    ]


def write_rttm(manifest: SessionManifest, out: TextIO) -> None:
    out.writelines(format_rttm_lines(manifest))


def write_rttm_file(manifests: Iterable[SessionManifest], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        for manifest in manifests:
            write_rttm(manifest, f)
    return path


def read_rttm(path: Union[str, Path]) -> Dict[str, List[Segment]]:
    """
    Parse an RTTM file into per-session (speaker, start, end) segments.

    Segments are sorted by start then speaker; zero-length segments are
    dropped. Non-SPEAKER records are a parse error.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"RTTM file not found: {path}")

    sessions: Dict[str, List[Segment]] = {}
    with path.open("r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != RTTM_FIELDS:
                raise ManifestParseError(path, line_number, f"expected {RTTM_FIELDS} fields, got {len(fields)}")
            if fields[0] != "SPEAKER":
                raise ManifestParseError(path, line_number, f"unsupported record type '{fields[0]}'")
            try:
                onset = float(fields[3])
                duration = float(fields[4])
            except ValueError as e:
                raise ManifestParseError(path, line_number, f"non-numeric time ({e})") from e
            if onset < 0 or duration < 0:
                raise ManifestParseError(path, line_number, "negative onset or duration")
            if duration == 0:
                continue
            sessions.setdefault(fields[1], []).append((fields[7], onset, onset + duration))

    for segments in sessions.values():
        segments.sort(key=lambda s: (s[1], s[0]))
    logger.debug(f"Read {sum(len(s) for s in sessions.values())} segments in {len(sessions)} sessions from {path}")
    return sessions
