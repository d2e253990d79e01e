"""Decibel gain."""

import numpy as np


def db_to_amplitude(gain_db: float) -> float:
    return float(10.0 ** (gain_db / 20.0))


def apply_gain(signal: np.ndarray, gain_db: float) -> np.ndarray:
    if not np.isfinite(gain_db):
        raise ValueError(f"Gain must be finite, got {gain_db}")
    return np.asarray(signal, dtype=np.float64) * db_to_amplitude(gain_db)
