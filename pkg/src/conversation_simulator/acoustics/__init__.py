"""
Acoustic Augmentation

Image-source room impulse responses, convolution, noise mixing at target
SNR and gain.
"""

from .convolution import convolve
from .gain import apply_gain, db_to_amplitude
from .noise import NoiseEvent, mean_power, mix_noise, sample_noise_events
from .room import ImpulseResponse, RoomSpec, image_method_rir, sample_positions, sample_room

__all__ = [
    "ImpulseResponse",
    "NoiseEvent",
    "RoomSpec",
    "apply_gain",
    "convolve",
    "db_to_amplitude",
    "image_method_rir",
    "mean_power",
    "mix_noise",
    "sample_noise_events",
    "sample_positions",
    "sample_room",
]
