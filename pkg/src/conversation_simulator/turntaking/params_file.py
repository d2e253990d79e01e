"""
Turn-Taking Parameter Files

Parameters are stored as flat KEY=value text (dotenv syntax, arrays as JSON)
so recipes and fitted models can be checked in and diffed.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import dotenv_values
from pydantic import ValidationError

from ..errors import ConfigError
from .model import TurnTakingMode, TurnTakingParams

logger = logging.getLogger(__name__)

# Setting key -> TurnTakingParams field
PARAM_KEYS: Dict[str, str] = {
    "TT_MODE": "mode",
    "TT_PRIOR": "prior",
    "TT_MATRIX": "matrix",
    "TT_BETA_TH": "beta_th",
    "TT_BETA_TS": "beta_ts",
    "TT_BETA_IR": "beta_ir",
    "TT_BC_MAX_DURATION": "bc_max_duration",
}


def parse_setting(value: Optional[str]) -> Any:
    """Bracketed values are JSON arrays; everything else stays a string."""
    if value is None:
        return None
    text = value.strip()
    if text.startswith("["):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Malformed array value {text!r}: {e}") from e
    return text


def params_from_settings(
    settings: Mapping[str, Any],
    base: Optional[TurnTakingParams] = None,
) -> TurnTakingParams:
    """
    Build params from TT_* settings layered over `base`.

    Keys outside PARAM_KEYS are ignored here; callers validate key names.
    """
    data = (base or TurnTakingParams()).model_dump()
    for key, field in PARAM_KEYS.items():
        if key in settings and settings[key] is not None:
            value = settings[key]
            data[field] = parse_setting(value) if isinstance(value, str) else value
    try:
        return TurnTakingParams(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid turn-taking parameters: {e}") from e


def params_to_settings(params: TurnTakingParams) -> Dict[str, str]:
    return {
        "TT_MODE": params.mode.value,
        "TT_PRIOR": json.dumps(list(params.prior)),
        "TT_MATRIX": json.dumps([list(row) for row in params.matrix]),
        "TT_BETA_TH": repr(params.beta_th),
        "TT_BETA_TS": repr(params.beta_ts),
        "TT_BETA_IR": repr(params.beta_ir),
        "TT_BC_MAX_DURATION": repr(params.bc_max_duration),
    }


def load_params_file(path: Union[str, Path], base: Optional[TurnTakingParams] = None) -> TurnTakingParams:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Turn-taking params file not found: {path}")
    settings = dotenv_values(path)
    unknown = sorted(k for k in settings if k not in PARAM_KEYS)
    if unknown:
        raise ConfigError(f"Unknown keys in {path}: {', '.join(unknown)}")
    logger.debug(f"Loaded turn-taking params from {path}")
    return params_from_settings(settings, base=base)


def save_params_file(params: TurnTakingParams, path: Union[str, Path], header: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    if header:
        lines.extend(f"# {line}" if line else "#" for line in header.splitlines())
    lines.extend(f"{key}={value}" for key, value in params_to_settings(params).items())
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info(f"Wrote turn-taking params to {path}")
    return path


def describe_params(params: TurnTakingParams) -> str:
    """Short human-readable summary used in logs and CLI output."""
    prior = ", ".join(f"{p:.4f}" for p in params.prior)
    text = (
        f"mode={params.mode.value} p=({prior}) beta_th={params.beta_th:.4f} "
        f"beta_ts={params.beta_ts:.4f} beta_ir={params.beta_ir:.4f} bc_max={params.bc_max_duration:g}"
    )
    if params.mode == TurnTakingMode.MARKOV:
        rows = "; ".join("(" + ", ".join(f"{p:.3f}" for p in row) + ")" for row in params.matrix)
        text += f" P=[{rows}]"
    return text
