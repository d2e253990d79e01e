"""
Session Manifest Models

Annotated multi-talker sessions: where the mixture lives and who speaks when.
"""

from collections import defaultdict
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..turntaking.model import TransitionType

SESSION_TOLERANCE = 1e-3
OVERLAP_EPSILON = 1e-9


class Supervision(BaseModel):
    """One annotated speech segment within a session."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    speaker_id: str = Field(..., alias="speaker", min_length=1)
    onset: float = Field(..., ge=0, description="Start time in the session (s)")
    duration: float = Field(..., gt=0, description="Dry speech duration (s)")
    source_id: Optional[str] = Field(None, description="Seed utterance id")
    transition: Optional[TransitionType] = Field(
        None, description="Transition that introduced this segment; unset for the first"
    )
    text: Optional[str] = None

    @property
    def end(self) -> float:
        return self.onset + self.duration


class SessionManifest(BaseModel):
    """
    One session: mixture audio plus its supervisions.

    audio_path is unset for plans that have not been rendered yet.
    """

    model_config = ConfigDict(frozen=True)

    session_id: str = Field(..., min_length=1)
    audio_path: Optional[str] = Field(None, description="Mixture WAV, relative to the manifest directory")
    duration: float = Field(..., ge=0, description="Session length (s)")
    sample_rate: int = Field(..., gt=0)
    supervisions: List[Supervision] = Field(default_factory=list)
    conversation_index: Optional[int] = Field(None, ge=0, description="Index within the generated dataset")
    seed: Optional[int] = Field(None, ge=0, description="Per-conversation seed")

    @model_validator(mode="after")
    def check_supervisions(self) -> "SessionManifest":
        by_speaker: Dict[str, List[Tuple[float, float]]] = defaultdict(list)
        for sup in self.supervisions:
            if sup.end > self.duration + SESSION_TOLERANCE:
                raise ValueError(
                    f"supervision of '{sup.speaker_id}' at {sup.onset:.3f}s ends after the session "
                    f"({sup.end:.3f} > {self.duration:.3f})"
                )
            by_speaker[sup.speaker_id].append((sup.onset, sup.end))
        for speaker, spans in by_speaker.items():
            spans.sort()
            for (s0, e0), (s1, _) in zip(spans, spans[1:]):
                if s1 < e0 - OVERLAP_EPSILON:
                    raise ValueError(
                        f"speaker '{speaker}' overlaps itself: [{s0:.3f}, {e0:.3f}] and starts again at {s1:.3f}"
                    )
        return self

    def timeline(self) -> List[Tuple[str, float, float]]:
        """(speaker, start, end) triples in supervision order."""
        return [(s.speaker_id, s.onset, s.end) for s in self.supervisions]
