"""Linear convolution with an impulse response."""

from typing import Optional

import numpy as np
from scipy.signal import fftconvolve

from ..errors import SampleRateMismatchError
from .room import ImpulseResponse

FFT_TAP_THRESHOLD = 128


def convolve(
    signal: np.ndarray,
    rir: ImpulseResponse,
    sample_rate: Optional[int] = None,
    method: Optional[str] = None,
) -> np.ndarray:
    """
    Full linear convolution; output length is len(signal) + len(taps) - 1.

    method: "fft", "direct" or None to use FFT above FFT_TAP_THRESHOLD taps.
    """
    if sample_rate is not None and sample_rate != rir.sample_rate:
        raise SampleRateMismatchError(
            f"signal is {sample_rate} Hz but the impulse response is {rir.sample_rate} Hz"
        )
    signal = np.asarray(signal, dtype=np.float64)
    if signal.size == 0:
        return np.zeros(0, dtype=np.float64)
    if method is None:
        method = "fft" if rir.length > FFT_TAP_THRESHOLD else "direct"
    if method == "fft":
        return fftconvolve(signal, rir.taps, mode="full")
    if method == "direct":
        return np.convolve(signal, rir.taps, mode="full")
    raise ValueError(f"Unknown convolution method '{method}'")
