"""
Transition Classification

Labels each utterance of an annotated timeline with the transition that
introduced it. Utterances are compared against the most recent non-BC
utterance, the same anchor the planner uses when placing them.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

from ..errors import ManifestValidationError
from .model import TransitionEvent, TransitionType

logger = logging.getLogger(__name__)

EPSILON = 1e-9

Timeline = Sequence[Tuple[str, float, float]]


def check_no_self_overlap(timeline: Timeline, record_id: str = "timeline", tolerance: float = EPSILON) -> None:
    """Raise ManifestValidationError if any speaker overlaps themselves."""
    by_speaker: Dict[str, List[Tuple[float, float]]] = defaultdict(list)
    for speaker, start, end in timeline:
        by_speaker[speaker].append((start, end))
    for speaker, spans in by_speaker.items():
        spans.sort()
        for (s0, e0), (s1, e1) in zip(spans, spans[1:]):
            if s1 < e0 - tolerance:
                raise ManifestValidationError(
                    record_id,
                    f"speaker '{speaker}' overlaps itself: [{s0:.3f}, {e0:.3f}] and [{s1:.3f}, {e1:.3f}]",
                )


def classify_transitions(
    timeline: Timeline,
    bc_max_duration: float,
    record_id: str = "timeline",
    tolerance: float = EPSILON,
) -> List[TransitionEvent]:
    """
    Classify every utterance after the first.

    Args:
        timeline: (speaker, start, end) triples sorted by start
        bc_max_duration: Longest overlapping utterance that can be a backchannel
        record_id: Name used in validation errors
        tolerance: Slack for time comparisons (use the annotation resolution
            for rounded inputs such as RTTM)

    Returns:
        One TransitionEvent per utterance except the first
    """
    check_no_self_overlap(timeline, record_id, tolerance)

    events: List[TransitionEvent] = []
    if not timeline:
        return events

    anchor_speaker, anchor_start, anchor_end = timeline[0]
    for speaker, start, end in timeline[1:]:
        if start < anchor_start - tolerance:
            raise ManifestValidationError(record_id, f"timeline is not sorted by start at {start:.3f}")

        duration = end - start
        anchor_duration = anchor_end - anchor_start

        if start >= anchor_end - tolerance:
            gap = max(start - anchor_end, 0.0)
            kind = TransitionType.TH if speaker == anchor_speaker else TransitionType.TS
            events.append(TransitionEvent(type=kind, gap=gap))
        elif duration <= bc_max_duration + tolerance and end <= anchor_end + tolerance:
            fraction = (start - anchor_start) / anchor_duration if anchor_duration > 0 else 0.0
            events.append(
                TransitionEvent(type=TransitionType.BC, bc_offset_fraction=min(max(fraction, 0.0), 1.0))
            )
            continue
        else:
            ratio = (anchor_end - start) / min(anchor_duration, duration)
            events.append(TransitionEvent(type=TransitionType.IR, overlap_ratio=min(ratio, 1.0)))

        anchor_speaker, anchor_start, anchor_end = speaker, start, end

    logger.debug(f"Classified {len(events)} transitions in {record_id}")
    return events
