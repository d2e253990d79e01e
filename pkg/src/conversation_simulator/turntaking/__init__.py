"""
Turn-Taking Model

Transition sampling, classification of annotated timelines, maximum-likelihood
fitting and the overlap-boost transform.
"""

from .classification import classify_transitions
from .fitting import boost_overlap, fit_overlap_rate, fit_params, fit_params_from_sessions
from .model import TRANSITION_ORDER, TransitionEvent, TransitionType, TurnTakingMode, TurnTakingParams
from .params_file import load_params_file, save_params_file
from .recipes import get_recipe, recipe_names
from .sampling import sample_event, sample_gap, sample_overlap_ratio, sample_transition

__all__ = [
    "TRANSITION_ORDER",
    "TransitionEvent",
    "TransitionType",
    "TurnTakingMode",
    "TurnTakingParams",
    "boost_overlap",
    "classify_transitions",
    "fit_overlap_rate",
    "fit_params",
    "fit_params_from_sessions",
    "get_recipe",
    "load_params_file",
    "recipe_names",
    "sample_event",
    "sample_gap",
    "sample_overlap_ratio",
    "sample_transition",
    "save_params_file",
]
