"""Shared pytest fixtures for all tests."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Dict

import numpy as np
import pytest

from conversation_simulator.config import AcousticConfig, ExecutorKind, SimulationConfig
from conversation_simulator.turntaking import TurnTakingParams, get_recipe

from tests.helpers import create_noise_corpus, create_synthetic_corpus

CONFIG_PREFIXES = ("SIM_", "TT_", "ACOUSTIC_")


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Remove simulator settings a developer .env may have exported."""
    for key in list(os.environ):
        if key.startswith(CONFIG_PREFIXES):
            monkeypatch.delenv(key, raising=False)


@pytest.fixture
def mock_env(monkeypatch: pytest.MonkeyPatch) -> Dict[str, str]:
    """
    Simulator settings exported through the environment.

    Returns:
        Dictionary of mocked environment variables
    """
    env_vars = {
        "SIM_SEED": "11",
        "SIM_NUM_CONVERSATIONS": "3",
        "SIM_TARGET_DURATION": "30",
        "SIM_NUM_WORKERS": "2",
        "TT_RECIPE": "nsf1",
        "ACOUSTIC_ENABLE_REVERB": "true",
    }

    for key, value in env_vars.items():
        monkeypatch.setenv(key, value)

    return env_vars


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def callhome_params() -> TurnTakingParams:
    return get_recipe("callhome")


@pytest.fixture
def synthetic_corpus(tmp_path: Path) -> Path:
    """Utterance manifest of a 4-speaker tone corpus."""
    return create_synthetic_corpus(tmp_path / "corpus", num_speakers=4, utterances_per_speaker=8)


@pytest.fixture
def noise_manifest(tmp_path: Path) -> Path:
    return create_noise_corpus(tmp_path / "noise")


@pytest.fixture
def simulation_config(tmp_path: Path, synthetic_corpus: Path) -> SimulationConfig:
    """A small, fast clean configuration on the synthetic corpus."""
    return SimulationConfig(
        seed=7,
        num_conversations=4,
        target_duration=20.0,
        num_speakers_distribution=[(2, 1.0), (3, 1.0)],
        turntaking=get_recipe("callhome"),
        acoustic=AcousticConfig(gain_range_db=(0.0, 0.0)),
        source_manifest=synthetic_corpus,
        output_dir=tmp_path / "output",
        num_workers=1,
        executor=ExecutorKind.THREAD,
    )
