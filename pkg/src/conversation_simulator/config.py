"""
Simulation Configuration

Configuration is layered, lowest to highest precedence:
model defaults, environment variables (a local .env is loaded on import),
a config file in KEY=value form, and explicit overrides from the CLI.
"""

import json
import logging
import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError
from .turntaking.model import TurnTakingParams
from .turntaking.params_file import PARAM_KEYS, load_params_file, params_from_settings, parse_setting
from .turntaking.recipes import get_recipe

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()

KNOWN_PREFIXES = ("SIM_", "TT_", "ACOUSTIC_")
TURNTAKING_EXTRA_KEYS = ("TT_RECIPE", "TT_PARAMS_FILE")


def _env(key: str, default: Any = None) -> Any:
    """Environment value with bracketed arrays decoded."""
    return parse_setting(os.getenv(key)) if os.getenv(key) is not None else default


class AudioSubtype(str, Enum):
    """WAV sample encoding of rendered mixtures"""
    PCM_16 = "PCM_16"
    FLOAT = "FLOAT"


class ExecutorKind(str, Enum):
    """Worker implementation used by the pipeline"""
    PROCESS = "process"
    THREAD = "thread"


class AcousticConfig(BaseModel):
    """
    Acoustic augmentation settings.

    enable_reverb / enable_noise select the four presets: clean, +noise,
    +rvb and +noise+rvb.
    """

    model_config = ConfigDict(frozen=True, validate_default=True)

    enable_reverb: bool = Field(
        default_factory=lambda: _env("ACOUSTIC_ENABLE_REVERB", False),
        description="Convolve each speaker with a per-session RIR",
    )
    enable_noise: bool = Field(
        default_factory=lambda: _env("ACOUSTIC_ENABLE_NOISE", False),
        description="Mix noise events from the noise manifest",
    )
    room_dim_min: Tuple[float, float, float] = Field(
        default_factory=lambda: _env("ACOUSTIC_ROOM_DIM_MIN", (3.0, 3.0, 2.5)),
        description="Smallest room (Lx, Ly, Lz) in meters",
    )
    room_dim_max: Tuple[float, float, float] = Field(
        default_factory=lambda: _env("ACOUSTIC_ROOM_DIM_MAX", (10.0, 8.0, 4.0)),
        description="Largest room (Lx, Ly, Lz) in meters",
    )
    absorption_range: Tuple[float, float] = Field(
        default_factory=lambda: _env("ACOUSTIC_ABSORPTION_RANGE", (0.2, 0.8)),
        description="Uniform range of the wall absorption coefficient",
    )
    max_order: int = Field(
        default_factory=lambda: _env("ACOUSTIC_MAX_ORDER", 6),
        description="Highest image-source reflection order",
    )
    speed_of_sound: float = Field(
        default_factory=lambda: _env("ACOUSTIC_SPEED_OF_SOUND", 343.0),
        description="Speed of sound (m/s)",
    )
    wall_margin: float = Field(
        default_factory=lambda: _env("ACOUSTIC_WALL_MARGIN", 0.5),
        description="Minimum distance of sources and mic from the walls (m)",
    )
    min_source_mic_distance: float = Field(
        default_factory=lambda: _env("ACOUSTIC_MIN_SOURCE_MIC_DISTANCE", 0.3),
        description="Minimum source to microphone distance (m)",
    )
    snr_range_db: Tuple[float, float] = Field(
        default_factory=lambda: _env("ACOUSTIC_SNR_RANGE_DB", (5.0, 20.0)),
        description="Uniform range of noise SNRs (dB)",
    )
    gain_range_db: Tuple[float, float] = Field(
        default_factory=lambda: _env("ACOUSTIC_GAIN_RANGE_DB", (-3.0, 3.0)),
        description="Uniform range of per-utterance gains (dB)",
    )
    noise_manifest: Optional[Path] = Field(
        default_factory=lambda: _env("ACOUSTIC_NOISE_MANIFEST"),
        description="JSON-lines noise manifest",
    )
    max_noise_sources: int = Field(
        default_factory=lambda: _env("ACOUSTIC_MAX_NOISE_SOURCES", 2),
        description="Background noise plus single-shot noises per session",
    )

    @field_validator("absorption_range")
    @classmethod
    def validate_absorption(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        low, high = v
        if not 0 < low <= high < 1:
            raise ValueError(f"absorption range must satisfy 0 < low <= high < 1, got {v}")
        return v

    @field_validator("snr_range_db", "gain_range_db")
    @classmethod
    def validate_range(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if v[0] > v[1]:
            raise ValueError(f"range low must not exceed high, got {v}")
        return v

    @field_validator("max_order", "max_noise_sources")
    @classmethod
    def validate_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"must be non-negative, got {v}")
        return v

    @model_validator(mode="after")
    def check_room_ranges(self) -> "AcousticConfig":
        for low, high in zip(self.room_dim_min, self.room_dim_max):
            if low > high:
                raise ValueError(f"room_dim_min {self.room_dim_min} exceeds room_dim_max {self.room_dim_max}")
            if low <= 2 * self.wall_margin:
                raise ValueError(f"room_dim_min {self.room_dim_min} leaves no room inside a {self.wall_margin} m margin")
        return self


class SimulationConfig(BaseModel):
    """
    Full dataset generation configuration.

    Environment variables feed the defaults; use load_simulation_config to
    layer a config file and overrides on top.
    """

    model_config = ConfigDict(frozen=True, validate_default=True)

    seed: int = Field(default_factory=lambda: _env("SIM_SEED", 0), ge=0, lt=2**64)
    num_conversations: int = Field(default_factory=lambda: _env("SIM_NUM_CONVERSATIONS", 10), ge=0)
    target_duration: float = Field(default_factory=lambda: _env("SIM_TARGET_DURATION", 120.0), gt=0)
    num_speakers_distribution: List[Tuple[int, float]] = Field(
        default_factory=lambda: _env("SIM_NUM_SPEAKERS", [(2, 1.0)]),
        description="(speaker count, weight) pairs",
    )
    turntaking: TurnTakingParams = Field(default_factory=TurnTakingParams)
    acoustic: AcousticConfig = Field(default_factory=AcousticConfig)
    source_manifest: Optional[Path] = Field(default_factory=lambda: _env("SIM_SOURCE_MANIFEST"))
    extra_source_manifests: List[Path] = Field(
        default_factory=lambda: _env("SIM_EXTRA_SOURCE_MANIFESTS", []),
        description="Additional seed domains combined into one speaker set",
    )
    output_dir: Path = Field(default_factory=lambda: _env("SIM_OUTPUT_DIR", "output"))
    num_workers: int = Field(default_factory=lambda: _env("SIM_NUM_WORKERS", 1), ge=1)
    sample_rate: int = Field(default_factory=lambda: _env("SIM_SAMPLE_RATE", 16000), gt=0)
    min_pause: float = Field(default_factory=lambda: _env("SIM_MIN_PAUSE", 0.3), gt=0)
    split_at_pauses: bool = Field(default_factory=lambda: _env("SIM_SPLIT_AT_PAUSES", True))
    audio_subtype: AudioSubtype = Field(default_factory=lambda: _env("SIM_AUDIO_SUBTYPE", AudioSubtype.PCM_16))
    executor: ExecutorKind = Field(default_factory=lambda: _env("SIM_EXECUTOR", ExecutorKind.PROCESS))
    write_audio: bool = Field(default_factory=lambda: _env("SIM_WRITE_AUDIO", True))
    session_prefix: str = Field(default_factory=lambda: _env("SIM_SESSION_PREFIX", "conv_"))

    @field_validator("num_speakers_distribution")
    @classmethod
    def validate_distribution(cls, v: List[Tuple[int, float]]) -> List[Tuple[int, float]]:
        if not v:
            raise ValueError("num_speakers_distribution must not be empty")
        for count, weight in v:
            if count < 1:
                raise ValueError(f"speaker count must be at least 1, got {count}")
            if not weight > 0:
                raise ValueError(f"weights must be positive, got {weight}")
        return v

    def speaker_counts(self) -> Tuple[List[int], List[float]]:
        """Counts and normalized probabilities of the speaker-count distribution."""
        counts = [c for c, _ in self.num_speakers_distribution]
        total = sum(w for _, w in self.num_speakers_distribution)
        return counts, [w / total for _, w in self.num_speakers_distribution]


# Setting key -> field name
SIMULATION_KEYS: Dict[str, str] = {
    "SIM_SEED": "seed",
    "SIM_NUM_CONVERSATIONS": "num_conversations",
    "SIM_TARGET_DURATION": "target_duration",
    "SIM_NUM_SPEAKERS": "num_speakers_distribution",
    "SIM_SOURCE_MANIFEST": "source_manifest",
    "SIM_EXTRA_SOURCE_MANIFESTS": "extra_source_manifests",
    "SIM_OUTPUT_DIR": "output_dir",
    "SIM_NUM_WORKERS": "num_workers",
    "SIM_SAMPLE_RATE": "sample_rate",
    "SIM_MIN_PAUSE": "min_pause",
    "SIM_SPLIT_AT_PAUSES": "split_at_pauses",
    "SIM_AUDIO_SUBTYPE": "audio_subtype",
    "SIM_EXECUTOR": "executor",
    "SIM_WRITE_AUDIO": "write_audio",
    "SIM_SESSION_PREFIX": "session_prefix",
}

ACOUSTIC_KEYS: Dict[str, str] = {
    f"ACOUSTIC_{name.upper()}": name for name in AcousticConfig.model_fields
}


def known_keys() -> List[str]:
    return sorted([*SIMULATION_KEYS, *ACOUSTIC_KEYS, *PARAM_KEYS, *TURNTAKING_EXTRA_KEYS])


def parse_override(text: str) -> Tuple[str, str]:
    """Split a KEY=VALUE override."""
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"Override must look like KEY=VALUE, got {text!r}")
    return key.strip(), value.strip()


def _check_keys(settings: Mapping[str, Any], source: str) -> None:
    allowed = set(known_keys())
    unknown = sorted(k for k in settings if k.startswith(KNOWN_PREFIXES) and k not in allowed)
    if unknown:
        raise ConfigError(f"Unknown configuration keys in {source}: {', '.join(unknown)}")


def read_config_file(path: Union[str, Path]) -> Dict[str, Optional[str]]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    settings = dict(dotenv_values(path))
    _check_keys(settings, str(path))
    return settings


def _relative_to(path_value: Any, base_dir: Optional[Path]) -> Any:
    if base_dir is None or path_value in (None, ""):
        return path_value
    candidate = Path(path_value)
    return candidate if candidate.is_absolute() else base_dir / candidate


def build_turntaking_params(settings: Mapping[str, Any], base_dir: Optional[Path] = None) -> TurnTakingParams:
    """
    Turn-taking parameters from TT_* settings.

    Layering: recipe (TT_RECIPE, default flat), then TT_PARAMS_FILE, then
    explicit TT_* keys.
    """
    params = get_recipe(str(settings.get("TT_RECIPE") or "flat"))
    params_file = settings.get("TT_PARAMS_FILE")
    if params_file:
        params = load_params_file(_relative_to(params_file, base_dir), base=params)
    return params_from_settings(settings, base=params)


def load_simulation_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> SimulationConfig:
    """
    Load the simulation configuration.

    Args:
        path: Optional KEY=value config file; relative paths inside it
            resolve against the file's directory
        overrides: Highest-precedence KEY=value settings

    Returns:
        Validated SimulationConfig

    Raises:
        ConfigError: Missing file, unknown keys or invalid values
    """
    overrides = dict(overrides or {})
    _check_keys(overrides, "overrides")
    base_dir = None
    file_settings: Dict[str, Any] = {}
    if path is not None:
        file_settings = read_config_file(path)
        base_dir = Path(path).resolve().parent

    env_settings = {k: v for k, v in os.environ.items() if k.startswith("TT_")}
    _check_keys(env_settings, "environment")
    merged: Dict[str, Any] = {**env_settings, **file_settings, **overrides}

    def value(key: str) -> Any:
        raw = merged[key]
        return parse_setting(raw) if isinstance(raw, str) else raw

    def from_file(key: str) -> bool:
        return key in file_settings and key not in overrides

    try:
        acoustic_kwargs = {field: value(key) for key, field in ACOUSTIC_KEYS.items() if key in merged}
        if "noise_manifest" in acoustic_kwargs and from_file("ACOUSTIC_NOISE_MANIFEST"):
            acoustic_kwargs["noise_manifest"] = _relative_to(acoustic_kwargs["noise_manifest"], base_dir)
        acoustic = AcousticConfig(**acoustic_kwargs)

        tt_base = base_dir if "TT_PARAMS_FILE" in file_settings and "TT_PARAMS_FILE" not in overrides else None
        turntaking = build_turntaking_params(merged, base_dir=tt_base)

        sim_kwargs = {field: value(key) for key, field in SIMULATION_KEYS.items() if key in merged}
        for key, field in (("SIM_SOURCE_MANIFEST", "source_manifest"), ("SIM_OUTPUT_DIR", "output_dir")):
            if field in sim_kwargs and from_file(key):
                sim_kwargs[field] = _relative_to(sim_kwargs[field], base_dir)
        if "extra_source_manifests" in sim_kwargs and from_file("SIM_EXTRA_SOURCE_MANIFESTS"):
            sim_kwargs["extra_source_manifests"] = [
                _relative_to(p, base_dir) for p in sim_kwargs["extra_source_manifests"]
            ]
        config = SimulationConfig(**sim_kwargs, acoustic=acoustic, turntaking=turntaking)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed configuration value: {e}") from e

    logger.debug(f"Loaded simulation config (file={path}, overrides={sorted(overrides)})")
    return config
