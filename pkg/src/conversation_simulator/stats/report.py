"""
Session Statistics

Speech, silence and overlap times by an exact sweep over supervision
boundaries, plus transition statistics from classify_transitions.
Per-session results combine through an associative merge.
"""

import logging
from typing import Dict, Iterable, Optional, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..models import SessionManifest
from ..turntaking.classification import EPSILON, classify_transitions
from ..turntaking.model import TRANSITION_ORDER, TransitionType

logger = logging.getLogger(__name__)


class StatsReport(BaseModel):
    """Descriptive statistics of a set of sessions."""

    sessions: int = Field(0, ge=0)
    speakers: int = Field(0, ge=0, description="Distinct speaker ids")
    total_duration: float = Field(0.0, ge=0, description="Sum of session durations (s)")
    total_speech: float = Field(0.0, ge=0, description="Time with at least one active speaker (s)")
    total_silence: float = Field(0.0, ge=0, description="Session time with nobody speaking (s)")
    total_speaker_time: float = Field(0.0, ge=0, description="Sum of supervision durations (s)")
    overlap_time: float = Field(0.0, ge=0, description="Time with two or more active speakers (s)")
    overlap_ratio: float = Field(0.0, ge=0, le=1, description="overlap_time / total_speech")
    transition_histogram: Dict[str, int] = Field(
        default_factory=lambda: {t.name: 0 for t in TRANSITION_ORDER}
    )
    mean_gap_th: Optional[float] = None
    mean_gap_ts: Optional[float] = None
    mean_overlap_ratio_ir: Optional[float] = None


def sweep_intervals(intervals: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """
    Exact (union, overlap) lengths of a set of intervals.

    Boundaries are deduplicated, +1/-1 deltas accumulated at each, and the
    running activity count weights each elementary segment.
    """
    if not intervals:
        return 0.0, 0.0
    starts = np.array([s for s, _ in intervals], dtype=np.float64)
    ends = np.array([e for _, e in intervals], dtype=np.float64)
    times, inverse = np.unique(np.concatenate([starts, ends]), return_inverse=True)
    deltas = np.zeros(times.size, dtype=np.int64)
    np.add.at(deltas, inverse, np.concatenate([np.ones(starts.size, np.int64), -np.ones(ends.size, np.int64)]))
    active = np.cumsum(deltas)[:-1]
    lengths = np.diff(times)
    union = float(lengths[active >= 1].sum())
    overlap = float(lengths[active >= 2].sum())
    return union, overlap


class StatsAccumulator:
    """Sums that StatsReport is derived from; merge() is associative."""

    def __init__(self) -> None:
        self.sessions = 0
        self.speaker_ids: Set[str] = set()
        self.total_duration = 0.0
        self.total_speech = 0.0
        self.total_speaker_time = 0.0
        self.overlap_time = 0.0
        self.counts = np.zeros(len(TRANSITION_ORDER), dtype=np.int64)
        self.gap_sums = np.zeros(len(TRANSITION_ORDER), dtype=np.float64)
        self.ratio_sum = 0.0

    def add_session(self, manifest: SessionManifest, bc_max_duration: float, tolerance: float = EPSILON) -> None:
        intervals = [(s.onset, s.end) for s in manifest.supervisions]
        union, overlap = sweep_intervals(intervals)
        timeline = sorted(manifest.timeline(), key=lambda t: t[1])
        events = classify_transitions(
            timeline, bc_max_duration, record_id=manifest.session_id, tolerance=tolerance
        )

        self.sessions += 1
        self.speaker_ids.update(s.speaker_id for s in manifest.supervisions)
        self.total_duration += max(manifest.duration, max((e for _, e in intervals), default=0.0))
        self.total_speech += union
        self.overlap_time += overlap
        self.total_speaker_time += sum(e - s for s, e in intervals)
        for event in events:
            self.counts[int(event.type)] += 1
            if event.gap is not None:
                self.gap_sums[int(event.type)] += event.gap
            if event.overlap_ratio is not None:
                self.ratio_sum += event.overlap_ratio

    def merge(self, other: "StatsAccumulator") -> "StatsAccumulator":
        merged = StatsAccumulator()
        merged.sessions = self.sessions + other.sessions
        merged.speaker_ids = self.speaker_ids | other.speaker_ids
        merged.total_duration = self.total_duration + other.total_duration
        merged.total_speech = self.total_speech + other.total_speech
        merged.total_speaker_time = self.total_speaker_time + other.total_speaker_time
        merged.overlap_time = self.overlap_time + other.overlap_time
        merged.counts = self.counts + other.counts
        merged.gap_sums = self.gap_sums + other.gap_sums
        merged.ratio_sum = self.ratio_sum + other.ratio_sum
        return merged

    def _mean(self, total: float, kind: TransitionType) -> Optional[float]:
        count = int(self.counts[int(kind)])
        return total / count if count else None

    def report(self) -> StatsReport:
        return StatsReport(
            sessions=self.sessions,
            speakers=len(self.speaker_ids),
            total_duration=self.total_duration,
            total_speech=self.total_speech,
            total_silence=max(self.total_duration - self.total_speech, 0.0),
            total_speaker_time=self.total_speaker_time,
            overlap_time=self.overlap_time,
            overlap_ratio=min(self.overlap_time / self.total_speech, 1.0) if self.total_speech > 0 else 0.0,
            transition_histogram={t.name: int(self.counts[int(t)]) for t in TRANSITION_ORDER},
            mean_gap_th=self._mean(float(self.gap_sums[int(TransitionType.TH)]), TransitionType.TH),
            mean_gap_ts=self._mean(float(self.gap_sums[int(TransitionType.TS)]), TransitionType.TS),
            mean_overlap_ratio_ir=self._mean(self.ratio_sum, TransitionType.IR),
        )


def compute_stats(
    manifests: Iterable[SessionManifest],
    bc_max_duration: float = 1.0,
    tolerance: float = EPSILON,
) -> StatsReport:
    """
    Aggregate statistics over sessions.

    Raises:
        ManifestValidationError: A session is inconsistent; names its session_id
    """
    accumulator = StatsAccumulator()
    for manifest in manifests:
        session = StatsAccumulator()
        session.add_session(manifest, bc_max_duration, tolerance=tolerance)
        accumulator = accumulator.merge(session)
    logger.debug(f"Computed stats over {accumulator.sessions} sessions")
    return accumulator.report()


def format_report_table(report: StatsReport) -> str:
    def fmt(value: Optional[float], unit: str = "") -> str:
        return "n/a" if value is None else f"{value:.4f}{unit}"

    lines = [
        "=" * 60,
        "Session Statistics",
        "=" * 60,
        f"Sessions:                      {report.sessions}",
        f"Speakers:                      {report.speakers}",
        f"Total duration:                {report.total_duration:.3f} s ({report.total_duration / 3600:.3f} h)",
        f"Speech (union):                {report.total_speech:.3f} s",
        f"Silence:                       {report.total_silence:.3f} s",
        f"Speaker time (sum):            {report.total_speaker_time:.3f} s",
        f"Overlap time:                  {report.overlap_time:.3f} s",
        f"Overlap ratio:                 {report.overlap_ratio:.4f}",
        "-" * 60,
    ]
    total = sum(report.transition_histogram.values())
    for name, count in report.transition_histogram.items():
        share = count / total if total else 0.0
        lines.append(f"{name + ' transitions:':<31}{count:>8}  ({share:.3f})")
    lines.extend(
        [
            "-" * 60,
            f"Mean TH gap:                   {fmt(report.mean_gap_th, ' s')}",
            f"Mean TS gap:                   {fmt(report.mean_gap_ts, ' s')}",
            f"Mean IR overlap ratio:         {fmt(report.mean_overlap_ratio_ir)}",
            "=" * 60,
        ]
    )
    return "\n".join(lines)
