"""
Conversation Planner

Runs the generative turn-taking loop over seed speaker pools and returns a
ConversationPlan. Every placement is anchored on the latest non-BC
placement; backchannels never become anchors.
"""

import logging
from collections import deque
from typing import Callable, Deque, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import PlanningError
from ..models import ConversationPlan, PlacedUtterance, SessionManifest, SourceUtterance, SpeakerPool, Supervision
from ..turntaking.model import TransitionEvent, TransitionType, TurnTakingParams
from ..turntaking.sampling import sample_event

logger = logging.getLogger(__name__)

MAX_PLACEMENTS = 100_000
EPSILON = 1e-9


class _UtterancePicker:
    """Draws a speaker's utterances without replacement, reshuffling on exhaustion."""

    def __init__(self, pool: SpeakerPool, rng: np.random.Generator):
        self._utterances = pool.utterances
        self._rng = rng
        self._queue: Deque[int] = deque()
        self._by_duration = sorted(pool.utterances, key=lambda u: u.duration)
        self._durations = np.array([u.duration for u in self._by_duration], dtype=np.float64)

    def _refill(self) -> None:
        self._queue.extend(int(i) for i in self._rng.permutation(len(self._utterances)))

    def peek(self) -> SourceUtterance:
        if not self._queue:
            self._refill()
        return self._utterances[self._queue[0]]

    def pop(self) -> SourceUtterance:
        utt = self.peek()
        self._queue.popleft()
        return utt

    @property
    def shortest(self) -> SourceUtterance:
        return self._by_duration[0]

    def draw_at_most(self, limit: float) -> Optional[SourceUtterance]:
        """Uniform draw, with replacement, among utterances no longer than `limit`."""
        count = int(np.searchsorted(self._durations, limit + EPSILON, side="right"))
        if count == 0:
            return None
        return self._by_duration[int(self._rng.integers(count))]


class _PlanBuilder:
    def __init__(
        self,
        params: TurnTakingParams,
        participants: List[str],
        pickers: Dict[str, _UtterancePicker],
        gain_range_db: Tuple[float, float],
        rng: np.random.Generator,
    ):
        self.params = params
        self.participants = participants
        self.pickers = pickers
        self.gain_low, self.gain_high = gain_range_db
        self.rng = rng
        self.placements: List[PlacedUtterance] = []
        self.last_end: Dict[str, float] = {s: 0.0 for s in participants}
        self.fallbacks = {"bc_to_ir": 0, "ir_to_ts": 0}

    def place(
        self,
        speaker: str,
        utt: SourceUtterance,
        onset: float,
        transition: Optional[TransitionType],
    ) -> PlacedUtterance:
        placement = PlacedUtterance(
            source_id=utt.id,
            speaker_id=speaker,
            onset=max(onset, 0.0),
            duration=utt.duration,
            transition=transition,
            gain_db=float(self.rng.uniform(self.gain_low, self.gain_high)),
        )
        self.placements.append(placement)
        self.last_end[speaker] = max(self.last_end[speaker], placement.end)
        return placement

    def others(self, anchor: PlacedUtterance) -> List[str]:
        return [s for s in self.participants if s != anchor.speaker_id]

    def place_gap(self, anchor: PlacedUtterance, event: TransitionEvent) -> PlacedUtterance:
        onset = anchor.end + event.gap
        if event.type == TransitionType.TH:
            speaker = anchor.speaker_id
        else:
            candidates = [s for s in self.others(anchor) if self.last_end[s] <= onset + EPSILON]
            if not candidates:
                raise PlanningError(f"No inactive speaker available for a turn switch at {onset:.3f}s")
            speaker = candidates[int(self.rng.integers(len(candidates)))]
        return self.place(speaker, self.pickers[speaker].pop(), onset, event.type)

    def place_interruption(self, anchor: PlacedUtterance, ratio: float) -> Optional[PlacedUtterance]:
        """
        Interrupt the anchor with a speaker who is free at the computed onset; None if nobody is.

        A speaker still talking at that onset may take a shorter utterance
        instead, drawn among those whose overlap at this ratio fits after
        their last end. The ratio itself is never changed.
        """
        others = self.others(anchor)
        for index in self.rng.permutation(len(others)):
            speaker = others[int(index)]
            picker = self.pickers[speaker]
            free = anchor.end - self.last_end[speaker]
            if ratio * min(anchor.duration, picker.peek().duration) <= free + EPSILON:
                utt = picker.pop()
            elif free > EPSILON:
                utt = picker.draw_at_most(free / ratio)
                if utt is None:
                    continue
            else:
                continue
            onset = max(anchor.end - ratio * min(anchor.duration, utt.duration), 0.0)
            return self.place(speaker, utt, onset, TransitionType.IR)
        return None

    def place_backchannel(self, anchor: PlacedUtterance, fraction: float) -> Optional[PlacedUtterance]:
        others = self.others(anchor)
        for index in self.rng.permutation(len(others)):
            speaker = others[int(index)]
            window_start = max(anchor.onset, self.last_end[speaker])
            available = anchor.end - window_start
            if available <= EPSILON:
                continue
            picker = self.pickers[speaker]
            utt = picker.draw_at_most(min(self.params.bc_max_duration, available))
            if utt is None:
                # no short utterance: the shortest one, if it still fits the window
                if picker.shortest.duration > available + EPSILON:
                    continue
                utt = picker.shortest
            onset = window_start + fraction * max(available - utt.duration, 0.0)
            return self.place(speaker, utt, onset, TransitionType.BC)
        return None

    def step(self, anchor: PlacedUtterance, prev: Optional[TransitionType]) -> PlacedUtterance:
        if len(self.participants) == 1:
            event = sample_event(self.params, prev, self.rng, kind=TransitionType.TH)
        else:
            event = sample_event(self.params, prev, self.rng)

        if event.type == TransitionType.BC:
            placed = self.place_backchannel(anchor, event.bc_offset_fraction)
            if placed is not None:
                return placed
            self.fallbacks["bc_to_ir"] += 1
            logger.debug(f"No speaker can backchannel at {anchor.onset:.3f}s; demoting to IR")
            event = sample_event(self.params, prev, self.rng, kind=TransitionType.IR)

        if event.type == TransitionType.IR:
            placed = self.place_interruption(anchor, event.overlap_ratio)
            if placed is not None:
                return placed
            self.fallbacks["ir_to_ts"] += 1
            logger.debug(f"Every other speaker is active near {anchor.end:.3f}s; demoting IR to TS")
            event = sample_event(self.params, prev, self.rng, kind=TransitionType.TS)

        return self.place_gap(anchor, event)


def build_plan(
    params: TurnTakingParams,
    pools: Sequence[SpeakerPool],
    num_speakers: int,
    target_duration: float,
    gain_range_db: Tuple[float, float] = (0.0, 0.0),
    rng: Optional[np.random.Generator] = None,
    session_id: str = "session",
    seed: int = 0,
    max_placements: int = MAX_PLACEMENTS,
) -> ConversationPlan:
    """
    Build one conversation plan.

    Args:
        params: Turn-taking parameters
        pools: Seed speaker pools; ids must be distinct
        num_speakers: Participants, drawn without replacement from pools
        target_duration: Planning stops once the timeline reaches this (s)
        gain_range_db: Per-utterance gain drawn uniformly from this range
        rng: Random stream; defaults to one seeded with `seed`
        session_id: Id of the resulting plan
        seed: Recorded in the plan
        max_placements: Abort threshold for parameters that never advance time

    Returns:
        ConversationPlan with placements sorted by onset

    Raises:
        PlanningError: If the inputs cannot produce a valid plan
    """
    if num_speakers < 1:
        raise PlanningError(f"num_speakers must be at least 1, got {num_speakers}")
    if not target_duration > 0:
        raise PlanningError(f"target_duration must be positive, got {target_duration}")
    if gain_range_db[0] > gain_range_db[1]:
        raise PlanningError(f"Invalid gain range {gain_range_db}")

    by_id: Dict[str, SpeakerPool] = {}
    for pool in pools:
        if pool.speaker_id in by_id:
            raise PlanningError(f"Speaker '{pool.speaker_id}' appears in more than one pool")
        by_id[pool.speaker_id] = pool
    if len(by_id) < num_speakers:
        raise PlanningError(f"Need {num_speakers} distinct speakers but only {len(by_id)} are available")

    rng = rng if rng is not None else np.random.default_rng(seed)
    speaker_ids = sorted(by_id)
    chosen = rng.choice(len(speaker_ids), size=num_speakers, replace=False)
    participants = [speaker_ids[int(i)] for i in chosen]
    pickers = {s: _UtterancePicker(by_id[s], rng) for s in participants}
    builder = _PlanBuilder(params, participants, pickers, gain_range_db, rng)

    first = participants[int(rng.integers(num_speakers))]
    anchor = builder.place(first, pickers[first].pop(), 0.0, None)
    prev: Optional[TransitionType] = None
    while anchor.end < target_duration:
        if len(builder.placements) >= max_placements:
            raise PlanningError(
                f"Plan '{session_id}' did not reach {target_duration}s within {max_placements} placements"
            )
        placed = builder.step(anchor, prev)
        prev = placed.transition
        if placed.transition != TransitionType.BC:
            anchor = placed

    placements = sorted(builder.placements, key=lambda p: p.onset)
    if any(builder.fallbacks.values()):
        logger.debug(f"Plan '{session_id}' fallbacks: {builder.fallbacks}")
    return ConversationPlan(
        session_id=session_id,
        num_speakers=num_speakers,
        target_duration=target_duration,
        seed=seed,
        speakers=participants,
        placements=placements,
        fallbacks=builder.fallbacks,
    )


def plan_to_session_manifest(
    plan: ConversationPlan,
    sample_rate: int,
    audio_path: Optional[str] = None,
    duration: Optional[float] = None,
    text_lookup: Optional[Callable[[str], Optional[str]]] = None,
    conversation_index: Optional[int] = None,
) -> SessionManifest:
    """Session manifest with the plan's dry timing as supervisions."""
    supervisions = [
        Supervision(
            speaker_id=p.speaker_id,
            onset=p.onset,
            duration=p.duration,
            source_id=p.source_id,
            transition=p.transition,
            text=text_lookup(p.source_id) if text_lookup else None,
        )
        for p in plan.placements
    ]
    return SessionManifest(
        session_id=plan.session_id,
        audio_path=audio_path,
        duration=plan.duration if duration is None else duration,
        sample_rate=sample_rate,
        supervisions=supervisions,
        conversation_index=conversation_index,
        seed=plan.seed,
    )
