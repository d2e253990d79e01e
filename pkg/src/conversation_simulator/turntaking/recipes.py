"""
Named Turn-Taking Recipes

Transition priors of the reference parameter sets. Rates use the model
defaults; the Markov matrix repeats the prior in every row, so Markov mode
behaves like the categorical recipe until a fitted matrix replaces it.
"""

from typing import Dict, List, Tuple

from ..errors import ConfigError
from .fitting import boost_overlap
from .model import TurnTakingParams

RECIPE_PRIORS: Dict[str, Tuple[float, float, float, float]] = {
    "flat": (0.25, 0.25, 0.25, 0.25),
    "nsf1": (0.18, 0.22, 0.30, 0.30),
    "callhome": (0.15, 0.21, 0.44, 0.20),
}

# boosted recipes: name -> (base recipe, factor)
BOOSTED_RECIPES: Dict[str, Tuple[str, float]] = {
    "callhome-ov": ("callhome", 2.0),
}


def recipe_names() -> List[str]:
    return sorted([*RECIPE_PRIORS, *BOOSTED_RECIPES])


def get_recipe(name: str) -> TurnTakingParams:
    key = name.strip().lower().replace("_", "-")
    if key in BOOSTED_RECIPES:
        base, factor = BOOSTED_RECIPES[key]
        return boost_overlap(get_recipe(base), factor)
    if key not in RECIPE_PRIORS:
        raise ConfigError(f"Unknown turn-taking recipe '{name}'. Available: {', '.join(recipe_names())}")
    prior = RECIPE_PRIORS[key]
    return TurnTakingParams(prior=prior, matrix=tuple(prior for _ in prior))
