"""
Pause-Boundary Segmentation

Splits aligned seed utterances at long inter-word pauses.
"""

import logging
from typing import List

from ..models import AudioRef, SourceUtterance

logger = logging.getLogger(__name__)


def split_at_pauses(utt: SourceUtterance, min_pause: float) -> List[SourceUtterance]:
    """
    Split an utterance at every inter-word gap of at least `min_pause`.

    Each split lands at the gap midpoint. A piece keeps at most min_pause/2
    of silence before its first word and after its last word. Utterances
    without alignments, or without a qualifying gap, come back unchanged.

    Args:
        utt: Seed utterance with optional word alignments
        min_pause: Shortest gap that splits, in seconds

    Returns:
        Sub-utterances in time order, ids suffixed with a running index
    """
    if min_pause <= 0:
        raise ValueError(f"min_pause must be positive, got {min_pause}")
    words = utt.words
    if not words or len(words) < 2:
        return [utt]

    groups = [[words[0]]]
    for prev, word in zip(words, words[1:]):
        if word[1] - prev[2] >= min_pause:
            groups.append([word])
        else:
            groups[-1].append(word)
    if len(groups) == 1:
        return [utt]

    pad = min_pause / 2.0
    pieces: List[SourceUtterance] = []
    for index, group in enumerate(groups):
        left_bound = 0.0 if index == 0 else (groups[index - 1][-1][2] + group[0][1]) / 2.0
        right_bound = (
            utt.audio.duration if index == len(groups) - 1 else (group[-1][2] + groups[index + 1][0][1]) / 2.0
        )
        start = max(left_bound, group[0][1] - pad)
        end = min(right_bound, group[-1][2] + pad)
        if end <= start:
            logger.debug(f"Dropping empty piece {index} of '{utt.id}'")
            continue
        pieces.append(
            SourceUtterance(
                id=f"{utt.id}-{index:03d}",
                speaker_id=utt.speaker_id,
                audio=AudioRef(path=utt.audio.path, offset=utt.audio.offset + start, duration=end - start),
                sample_rate=utt.sample_rate,
                words=[(token, ws - start, we - start) for token, ws, we in group],
                text=" ".join(token for token, _, _ in group),
            )
        )

    logger.debug(f"Split '{utt.id}' into {len(pieces)} pieces at min_pause={min_pause}")
    return pieces


def split_corpus(utterances: List[SourceUtterance], min_pause: float) -> List[SourceUtterance]:
    """Apply split_at_pauses to every utterance, preserving order."""
    return [piece for utt in utterances for piece in split_at_pauses(utt, min_pause)]
