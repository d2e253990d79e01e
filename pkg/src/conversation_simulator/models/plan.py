"""
Conversation Plan Models

A plan is pure metadata: which seed utterance each speaker says, when, and
at what level. Invariants are checked by planner.validation, not here, so
broken plans can still be represented and reported.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from ..turntaking.model import TransitionType


class PlacedUtterance(BaseModel):
    """One realized step of the generative loop."""

    source_id: str = Field(..., min_length=1)
    speaker_id: str = Field(..., min_length=1)
    onset: float = Field(..., ge=0, description="Session time of the first sample (s)")
    duration: float = Field(..., gt=0, description="Dry duration (s)")
    transition: Optional[TransitionType] = Field(
        None, description="Realized transition type; unset for the opening utterance"
    )
    gain_db: float = Field(0.0, description="Per-utterance gain (dB)")

    @property
    def end(self) -> float:
        return self.onset + self.duration


class ConversationPlan(BaseModel):
    """Ordered placements for one session."""

    session_id: str = Field(..., min_length=1)
    num_speakers: int = Field(..., ge=1)
    target_duration: float = Field(..., gt=0)
    seed: int = Field(0, ge=0, description="Seed of the random stream the plan was drawn from")
    speakers: List[str] = Field(default_factory=list, description="Participants in selection order")
    placements: List[PlacedUtterance] = Field(default_factory=list)
    fallbacks: Dict[str, int] = Field(
        default_factory=lambda: {"bc_to_ir": 0, "ir_to_ts": 0},
        description="How often a sampled transition was demoted",
    )

    @property
    def duration(self) -> float:
        return max((p.end for p in self.placements), default=0.0)
