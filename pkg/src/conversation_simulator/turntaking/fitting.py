"""
Maximum-Likelihood Fitting

Estimates TurnTakingParams from classified transition events and provides
the overlap-boost transform applied to fitted or recipe parameters.
"""

import logging
from typing import List, Sequence

import numpy as np
from scipy.optimize import bisect

from ..errors import FittingError
from .model import TRANSITION_ORDER, TransitionEvent, TransitionType, TurnTakingMode, TurnTakingParams

logger = logging.getLogger(__name__)

BETA_IR_BRACKET = (1e-6, 500.0)
BETA_IR_XTOL = 1e-8


def _truncated_exponential_score(beta: float, mean_ratio: float) -> float:
    """Derivative of the mean log-likelihood, divided by n."""
    return 1.0 / beta - 1.0 / np.expm1(beta) - mean_ratio


def fit_overlap_rate(ratios: Sequence[float]) -> float:
    """
    MLE of the rate of an exponential truncated to (0, 1].

    The score is monotone decreasing in beta, so bisection on its root is
    exact to BETA_IR_XTOL inside the search bracket.
    """
    values = np.asarray(ratios, dtype=np.float64)
    if values.size == 0:
        raise FittingError("No IR overlap ratios to estimate beta_ir from", kind="IR")
    mean_ratio = float(values.mean())

    low, high = BETA_IR_BRACKET
    if _truncated_exponential_score(low, mean_ratio) <= 0:
        logger.warning(
            f"Mean IR overlap ratio {mean_ratio:.4f} needs a non-decreasing density; "
            f"clamping beta_ir to {low}"
        )
        return low
    if _truncated_exponential_score(high, mean_ratio) >= 0:
        logger.warning(f"Mean IR overlap ratio {mean_ratio:.6f} is tiny; clamping beta_ir to {high}")
        return high
    return float(bisect(_truncated_exponential_score, low, high, args=(mean_ratio,), xtol=BETA_IR_XTOL))


def _fit_gap_rate(events: Sequence[TransitionEvent], kind: TransitionType) -> float:
    gaps = np.asarray([e.gap for e in events if e.type == kind], dtype=np.float64)
    if gaps.size == 0:
        raise FittingError(f"No {kind.name} gaps to estimate beta_{kind.name.lower()} from", kind=kind.name)
    mean_gap = float(gaps.mean())
    if mean_gap <= 0:
        raise FittingError(
            f"All {kind.name} gaps are zero; beta_{kind.name.lower()} would be infinite", kind=kind.name
        )
    return 1.0 / mean_gap


def fit_params_from_sessions(
    sessions: Sequence[Sequence[TransitionEvent]],
    mode: TurnTakingMode = TurnTakingMode.CATEGORICAL,
    bc_max_duration: float = 1.0,
) -> TurnTakingParams:
    """
    Fit all parameters from per-session event sequences.

    Markov bigrams are counted within sessions only. A matrix row with no
    observed outgoing transitions is filled with the fitted prior.
    """
    events: List[TransitionEvent] = [e for session in sessions for e in session]
    if not events:
        raise FittingError("Cannot fit turn-taking parameters from zero events")

    codes = np.fromiter((int(e.type) for e in events), dtype=np.int64, count=len(events))
    counts = np.bincount(codes, minlength=len(TRANSITION_ORDER)).astype(np.float64)
    prior = counts / counts.sum()

    bigrams = np.zeros((len(TRANSITION_ORDER), len(TRANSITION_ORDER)), dtype=np.float64)
    for session in sessions:
        session_codes = [int(e.type) for e in session]
        if len(session_codes) > 1:
            np.add.at(bigrams, (session_codes[:-1], session_codes[1:]), 1.0)
    row_totals = bigrams.sum(axis=1, keepdims=True)
    matrix = np.where(row_totals > 0, bigrams / np.where(row_totals > 0, row_totals, 1.0), prior)

    params = TurnTakingParams(
        mode=mode,
        prior=tuple(float(x) for x in prior),
        matrix=tuple(tuple(float(x) for x in row) for row in matrix),
        beta_th=_fit_gap_rate(events, TransitionType.TH),
        beta_ts=_fit_gap_rate(events, TransitionType.TS),
        beta_ir=fit_overlap_rate([e.overlap_ratio for e in events if e.type == TransitionType.IR]),
        bc_max_duration=bc_max_duration,
    )
    logger.info(
        f"Fitted {len(events)} events: counts TH={int(counts[0])} TS={int(counts[1])} "
        f"IR={int(counts[2])} BC={int(counts[3])}"
    )
    return params


def fit_params(
    events: Sequence[TransitionEvent],
    mode: TurnTakingMode = TurnTakingMode.CATEGORICAL,
    bc_max_duration: float = 1.0,
) -> TurnTakingParams:
    """Fit parameters from a single event sequence."""
    return fit_params_from_sessions([events], mode=mode, bc_max_duration=bc_max_duration)


def _boost_vector(values: Sequence[float], factor: float) -> tuple:
    scaled = np.asarray(values, dtype=np.float64) * np.array([1.0, 1.0, factor, factor])
    return tuple(float(x) for x in scaled / scaled.sum())


def boost_overlap(params: TurnTakingParams, factor: float) -> TurnTakingParams:
    """
    Multiply the IR and BC probabilities by `factor` and renormalize.

    Applied to the prior and to every Markov row; rates are unchanged.
    """
    if not factor > 0:
        raise ValueError(f"Overlap boost factor must be positive, got {factor}")
    data = params.model_dump()
    data["prior"] = _boost_vector(params.prior, factor)
    data["matrix"] = tuple(_boost_vector(row, factor) for row in params.matrix)
    return TurnTakingParams(**data)
