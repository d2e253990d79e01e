"""
Plan Validation

Exhaustive pairwise check of the plan invariants. Quadratic on purpose: it
is the reference the planner is tested against.
"""

from typing import List, Optional

from ..models import ConversationPlan, PlacedUtterance
from ..turntaking.model import TransitionType

EPSILON = 1e-9


def _describe(index: int, p: PlacedUtterance) -> str:
    return f"#{index} {p.speaker_id} [{p.onset:.3f}, {p.end:.3f}]"


def validate_plan(plan: ConversationPlan) -> List[str]:
    """
    Return one description per violated invariant; empty iff the plan is valid.

    Checks onset order, a first onset of 0, speaker self-overlap over every
    pair, and containment of each BC in the latest non-BC placement before
    it, which must belong to another speaker.
    """
    violations: List[str] = []
    placements = plan.placements
    if not placements:
        return violations

    if abs(placements[0].onset) > EPSILON:
        violations.append(f"first placement starts at {placements[0].onset:.3f}s, not 0")

    for i in range(1, len(placements)):
        if placements[i].onset < placements[i - 1].onset - EPSILON:
            violations.append(
                f"placements out of onset order: {_describe(i - 1, placements[i - 1])} before {_describe(i, placements[i])}"
            )

    for i, a in enumerate(placements):
        for j in range(i + 1, len(placements)):
            b = placements[j]
            if a.speaker_id != b.speaker_id:
                continue
            if max(a.onset, b.onset) < min(a.end, b.end) - EPSILON:
                violations.append(f"self-overlap: {_describe(i, a)} and {_describe(j, b)}")

    host_index: Optional[int] = None
    for i, p in enumerate(placements):
        if p.transition != TransitionType.BC:
            host_index = i
            continue
        if host_index is None:
            violations.append(f"backchannel {_describe(i, p)} has no preceding utterance")
            continue
        host = placements[host_index]
        if host.speaker_id == p.speaker_id:
            violations.append(f"backchannel {_describe(i, p)} follows its own speaker's {_describe(host_index, host)}")
        elif host.onset > p.onset + EPSILON or host.end < p.end - EPSILON:
            violations.append(f"backchannel {_describe(i, p)} is not inside {_describe(host_index, host)}")

    return violations
