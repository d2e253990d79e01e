"""
Turn-Taking Model Types

Transition types, the full parameter set of the generative turn-taking
model and a single sampled or observed transition event.
"""

from enum import Enum, IntEnum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

PROBABILITY_TOLERANCE = 1e-9


class TransitionType(IntEnum):
    """Utterance transition types; integer codes are the serialized form."""

    TH = 0  # turn hold: same speaker continues after a pause
    TS = 1  # turn switch: different speaker after a gap
    IR = 2  # interruption: different speaker with overlap
    BC = 3  # backchannel: short overlap contained in the current turn


TRANSITION_ORDER: Tuple[TransitionType, ...] = (
    TransitionType.TH,
    TransitionType.TS,
    TransitionType.IR,
    TransitionType.BC,
)


class TurnTakingMode(str, Enum):
    """How the next transition type is drawn"""
    CATEGORICAL = "categorical"
    MARKOV = "markov"


def _check_distribution(values: List[float], label: str) -> None:
    if len(values) != len(TRANSITION_ORDER):
        raise ValueError(f"{label} must have {len(TRANSITION_ORDER)} entries, got {len(values)}")
    if any(v < 0 or not np.isfinite(v) for v in values):
        raise ValueError(f"{label} entries must be finite and non-negative: {values}")
    total = float(sum(values))
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise ValueError(f"{label} must sum to 1 (got {total:.12f})")


class TurnTakingParams(BaseModel):
    """
    Parameters of the turn-taking model.

    `prior` is the categorical distribution over (TH, TS, IR, BC); `matrix[i][j]`
    is p(z_t = j | z_{t-1} = i) for Markov mode. Gap rates are in 1/seconds,
    `beta_ir` is the dimensionless rate of the truncated-exponential overlap ratio.
    """

    model_config = ConfigDict(frozen=True)

    mode: TurnTakingMode = Field(TurnTakingMode.CATEGORICAL, description="Transition sampling mode")
    prior: Tuple[float, float, float, float] = Field(
        (0.25, 0.25, 0.25, 0.25), description="Categorical probabilities (TH, TS, IR, BC)"
    )
    matrix: Tuple[Tuple[float, float, float, float], ...] = Field(
        default_factory=lambda: tuple((0.25, 0.25, 0.25, 0.25) for _ in TRANSITION_ORDER),
        description="Row-stochastic Markov transition matrix",
    )
    beta_th: float = Field(2.0, gt=0, description="Turn-hold pause rate (1/s)")
    beta_ts: float = Field(4.0, gt=0, description="Turn-switch gap rate (1/s)")
    beta_ir: float = Field(5.0, gt=0, description="Overlap-ratio rate of the truncated exponential")
    bc_max_duration: float = Field(1.0, gt=0, description="Longest utterance counted as backchannel (s)")

    @field_validator("prior")
    @classmethod
    def validate_prior(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        _check_distribution(list(v), "prior")
        return v

    @field_validator("matrix")
    @classmethod
    def validate_matrix(cls, v: Tuple[Tuple[float, ...], ...]) -> Tuple[Tuple[float, ...], ...]:
        if len(v) != len(TRANSITION_ORDER):
            raise ValueError(f"matrix must have {len(TRANSITION_ORDER)} rows, got {len(v)}")
        for kind, row in zip(TRANSITION_ORDER, v):
            _check_distribution(list(row), f"matrix row {kind.name}")
        return v

    def prior_array(self) -> np.ndarray:
        return np.asarray(self.prior, dtype=np.float64)

    def matrix_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=np.float64)


class TransitionEvent(BaseModel):
    """One transition: its type plus exactly the parameter that type carries."""

    model_config = ConfigDict(frozen=True)

    type: TransitionType
    gap: Optional[float] = Field(None, ge=0, description="Silence before the utterance (TH/TS)")
    overlap_ratio: Optional[float] = Field(None, gt=0, le=1, description="Overlap extent ratio (IR)")
    bc_offset_fraction: Optional[float] = Field(None, ge=0, le=1, description="Position inside the parent span (BC)")

    @model_validator(mode="after")
    def check_single_parameter(self) -> "TransitionEvent":
        expected = {
            TransitionType.TH: "gap",
            TransitionType.TS: "gap",
            TransitionType.IR: "overlap_ratio",
            TransitionType.BC: "bc_offset_fraction",
        }[self.type]
        for name in ("gap", "overlap_ratio", "bc_offset_fraction"):
            present = getattr(self, name) is not None
            if name == expected and not present:
                raise ValueError(f"{self.type.name} event requires '{name}'")
            if name != expected and present:
                raise ValueError(f"{self.type.name} event must not carry '{name}'")
        return self
