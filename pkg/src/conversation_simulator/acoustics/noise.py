"""
Noise Mixing

Adds noise events to a speech mixture at target SNRs. The SNR reference is
the mean-square power of the speech over each event's active span.
"""

import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..errors import ZeroPowerError
from ..models import AudioRef, NoiseRecording

logger = logging.getLogger(__name__)

NoiseLoader = Callable[[AudioRef], np.ndarray]


class NoiseEvent(BaseModel):
    """One noise source placed in a session."""

    model_config = ConfigDict(frozen=True)

    noise_ref: AudioRef
    snr_db: float = Field(..., description="Speech-to-noise ratio over the active span (dB)")
    onset: float = Field(0.0, ge=0, description="Session time where the noise starts (s)")
    loop: bool = Field(False, description="Repeat the noise to the end of the speech")

    @field_validator("snr_db")
    @classmethod
    def validate_snr(cls, v: float) -> float:
        if not np.isfinite(v):
            raise ValueError(f"snr_db must be finite, got {v}")
        return v


def mean_power(signal: np.ndarray) -> float:
    return float(np.mean(np.square(signal))) if signal.size else 0.0


def _noise_segment(
    noise: np.ndarray,
    span: int,
    loop: bool,
    rng: np.random.Generator,
) -> np.ndarray:
    if loop:
        start = int(rng.integers(noise.size))
        return np.resize(np.roll(noise, -start), span)
    return noise[:span]


def mix_noise(
    speech: np.ndarray,
    events: Sequence[NoiseEvent],
    noise_loader: NoiseLoader,
    rng: np.random.Generator,
    sample_rate: int,
) -> np.ndarray:
    """
    Return speech plus every noise event scaled to its SNR.

    Looped events start at a random offset of the noise clip and fill the
    rest of the speech; other events play once, truncated at the speech end.
    The input array is not modified.

    Raises:
        ZeroPowerError: Speech is silent overall or over an event's span, or a
            noise segment is silent
    """
    speech = np.asarray(speech, dtype=np.float64)
    mixture = speech.copy()
    if not events:
        return mixture
    if mean_power(speech) == 0.0:
        raise ZeroPowerError("Cannot mix noise at a target SNR into silent speech")

    for event in events:
        start = int(round(event.onset * sample_rate))
        span = speech.size - start
        if span <= 0:
            logger.debug(f"Noise event at {event.onset:.3f}s starts after the speech ends; skipped")
            continue
        noise = np.asarray(noise_loader(event.noise_ref), dtype=np.float64)
        if noise.size == 0:
            raise ZeroPowerError(f"Noise clip {event.noise_ref.path} is empty")
        segment = _noise_segment(noise, span, event.loop, rng)
        end = start + segment.size

        speech_power = mean_power(speech[start:end])
        noise_power = mean_power(segment)
        if speech_power == 0.0:
            raise ZeroPowerError(f"Speech is silent over the noise span [{start}, {end}) samples")
        if noise_power == 0.0:
            raise ZeroPowerError(f"Noise clip {event.noise_ref.path} has zero power")

        scale = np.sqrt(speech_power / (noise_power * 10.0 ** (event.snr_db / 10.0)))
        mixture[start:end] += scale * segment
    return mixture


def sample_noise_events(
    noises: Sequence[NoiseRecording],
    snr_range_db: Tuple[float, float],
    max_sources: int,
    placement_onsets: Sequence[float],
    rng: np.random.Generator,
) -> List[NoiseEvent]:
    """
    Session noise policy.

    One looped background noise from time 0, then up to max_sources - 1
    single-shot noises, each starting at the onset of a randomly chosen
    placement so its span always contains speech.
    """
    if not noises or max_sources < 1:
        if not noises:
            logger.warning("Noise is enabled but the noise pool is empty; no noise added")
        return []

    def draw(onset: float, loop: bool) -> NoiseEvent:
        noise = noises[int(rng.integers(len(noises)))]
        snr = float(rng.uniform(snr_range_db[0], snr_range_db[1]))
        return NoiseEvent(noise_ref=noise.audio, snr_db=snr, onset=onset, loop=loop)

    events = [draw(0.0, True)]
    for _ in range(max_sources - 1):
        if not placement_onsets:
            break
        onset = float(placement_onsets[int(rng.integers(len(placement_onsets)))])
        events.append(draw(onset, False))
    return events
