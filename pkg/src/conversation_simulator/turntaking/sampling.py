"""
Turn-Taking Samplers

Every sampler consumes exactly one uniform variate from the given
numpy Generator, so draws are reproducible across runs and workers.
"""

from typing import Optional

import numpy as np

from .model import TransitionEvent, TransitionType, TurnTakingMode, TurnTakingParams

GAP_KINDS = (TransitionType.TH, TransitionType.TS)


def transition_from_uniform(probabilities: np.ndarray, u: float) -> TransitionType:
    """
    Inverse CDF over the fixed order (TH, TS, IR, BC).

    Returns the first type k with p_k > 0 and cumsum(p)[k] >= u.
    """
    probabilities = np.asarray(probabilities, dtype=np.float64)
    positive = np.flatnonzero(probabilities > 0)
    cdf = np.cumsum(probabilities)
    candidates = positive[cdf[positive] >= u]
    index = candidates[0] if candidates.size else positive[-1]
    return TransitionType(int(index))


def gap_from_uniform(beta: float, u: float) -> float:
    return float(-np.log1p(-u) / beta)


def overlap_ratio_from_uniform(beta: float, u: float) -> float:
    """Inverse CDF of the exponential with rate beta truncated to (0, 1]."""
    ratio = -np.log1p(-u * -np.expm1(-beta)) / beta
    return float(min(ratio, 1.0))


def sample_transition(
    params: TurnTakingParams,
    prev: Optional[TransitionType],
    rng: np.random.Generator,
) -> TransitionType:
    if params.mode == TurnTakingMode.MARKOV and prev is not None:
        probabilities = params.matrix_array()[int(prev)]
    else:
        # first Markov step uses the categorical prior
        probabilities = params.prior_array()
    return transition_from_uniform(probabilities, rng.random())


def sample_gap(params: TurnTakingParams, kind: TransitionType, rng: np.random.Generator) -> float:
    if kind == TransitionType.TH:
        beta = params.beta_th
    elif kind == TransitionType.TS:
        beta = params.beta_ts
    else:
        raise ValueError(f"Gaps are only defined for TH and TS transitions, got {TransitionType(kind).name}")
    return gap_from_uniform(beta, rng.random())


def sample_overlap_ratio(params: TurnTakingParams, rng: np.random.Generator) -> float:
    # 1 - U lies in (0, 1], which keeps the ratio strictly positive
    return overlap_ratio_from_uniform(params.beta_ir, 1.0 - rng.random())


def sample_bc_offset_fraction(rng: np.random.Generator) -> float:
    return float(rng.random())


def sample_event(
    params: TurnTakingParams,
    prev: Optional[TransitionType],
    rng: np.random.Generator,
    kind: Optional[TransitionType] = None,
) -> TransitionEvent:
    """
    Draw one generative step: the transition type and the parameter it carries.

    Passing `kind` skips the type draw (used when the type is forced).
    """
    if kind is None:
        kind = sample_transition(params, prev, rng)
    if kind in GAP_KINDS:
        return TransitionEvent(type=kind, gap=sample_gap(params, kind, rng))
    if kind == TransitionType.IR:
        return TransitionEvent(type=kind, overlap_ratio=sample_overlap_ratio(params, rng))
    return TransitionEvent(type=kind, bc_offset_fraction=sample_bc_offset_fraction(rng))
