"""
Session Renderer

Turns a ConversationPlan into a mixture waveform and its SessionManifest.
Mixing accumulates in float64; quantization happens only when the WAV is
written.
"""

import logging
import math
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..acoustics import (
    ImpulseResponse,
    apply_gain,
    convolve,
    image_method_rir,
    mix_noise,
    sample_noise_events,
    sample_positions,
    sample_room,
)
from ..acoustics.noise import NoiseLoader
from ..config import AcousticConfig
from ..models import ConversationPlan, NoiseRecording, SessionManifest
from ..planner import plan_to_session_manifest

logger = logging.getLogger(__name__)

PEAK_LIMIT = 0.99


class SourceLoader(Protocol):
    """Read-only access to seed audio; see corpus_io.SourceAudioLoader."""

    sample_rate: int

    def load(self, source_id: str) -> np.ndarray: ...

    def text(self, source_id: str) -> Optional[str]: ...


class RenderResult(BaseModel):
    """Rendered mixture plus its manifest."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    samples: np.ndarray
    sample_rate: int = Field(..., gt=0)
    manifest: SessionManifest
    peak_scale: float = Field(1.0, gt=0, le=1, description="Global scale applied to stay below the peak limit")


def speaker_rirs(
    speakers: Sequence[str],
    acoustic: AcousticConfig,
    sample_rate: int,
    rng: np.random.Generator,
) -> Dict[str, ImpulseResponse]:
    """One room per session, one source position and RIR per speaker."""
    room = sample_room(
        acoustic.room_dim_min,
        acoustic.room_dim_max,
        acoustic.absorption_range,
        acoustic.max_order,
        acoustic.speed_of_sound,
        rng,
    )
    mic, sources = sample_positions(
        room, len(speakers), acoustic.wall_margin, acoustic.min_source_mic_distance, rng
    )
    return {
        speaker: image_method_rir(room, source, mic, sample_rate)
        for speaker, source in zip(speakers, sources)
    }


def _mixture_length(
    plan: ConversationPlan,
    rirs: Dict[str, ImpulseResponse],
    contributions: Sequence[Tuple[int, np.ndarray]],
    sample_rate: int,
) -> int:
    """ceil((last end + RIR tail) * fs), widened if a source runs past its manifest duration."""
    if not plan.placements:
        return 0
    tail = max((rir.length - 1 for rir in rirs.values()), default=0)
    nominal = math.ceil(max(p.end for p in plan.placements) * sample_rate - 1e-9) + tail
    return max(nominal, max(start + signal.size for start, signal in contributions))


def render(
    plan: ConversationPlan,
    acoustic: AcousticConfig,
    sources: SourceLoader,
    rng: np.random.Generator,
    noises: Sequence[NoiseRecording] = (),
    noise_loader: Optional[NoiseLoader] = None,
    audio_path: Optional[str] = None,
    conversation_index: Optional[int] = None,
) -> RenderResult:
    """
    Render a plan.

    Random draws happen in a fixed order: room and positions, then noise
    events, then loop offsets inside mix_noise.

    Args:
        plan: Conversation plan
        acoustic: Augmentation switches and ranges
        sources: Seed audio loader at the target sample rate
        rng: Random stream for room, positions and noise
        noises: Noise pool used when acoustic.enable_noise is set
        noise_loader: Loads a noise AudioRef at the target sample rate
        audio_path: Recorded in the manifest
        conversation_index: Recorded in the manifest

    Returns:
        RenderResult; supervisions carry the plan's dry timing
    """
    fs = sources.sample_rate
    rirs: Dict[str, ImpulseResponse] = {}
    if acoustic.enable_reverb and plan.placements:
        rirs = speaker_rirs(plan.speakers, acoustic, fs, rng)

    contributions: List[Tuple[int, np.ndarray]] = []
    for placement in plan.placements:
        signal = apply_gain(sources.load(placement.source_id), placement.gain_db)
        if placement.speaker_id in rirs:
            signal = convolve(signal, rirs[placement.speaker_id], sample_rate=fs)
        contributions.append((int(round(placement.onset * fs)), signal))

    length = _mixture_length(plan, rirs, contributions, fs)
    mixture = np.zeros(length, dtype=np.float64)
    for start, signal in contributions:
        mixture[start : start + signal.size] += signal

    if acoustic.enable_noise and length > 0:
        if noise_loader is None:
            raise ValueError("Noise is enabled but no noise loader was given")
        events = sample_noise_events(
            noises,
            acoustic.snr_range_db,
            acoustic.max_noise_sources,
            [p.onset for p in plan.placements],
            rng,
        )
        mixture = mix_noise(mixture, events, noise_loader, rng, fs)

    peak = float(np.max(np.abs(mixture))) if length else 0.0
    peak_scale = 1.0
    if peak > PEAK_LIMIT:
        peak_scale = PEAK_LIMIT / peak
        mixture *= peak_scale
        logger.debug(f"Scaled '{plan.session_id}' by {peak_scale:.4f} (peak {peak:.3f})")

    manifest = plan_to_session_manifest(
        plan,
        sample_rate=fs,
        audio_path=audio_path,
        duration=max(length / fs, plan.duration),
        text_lookup=sources.text,
        conversation_index=conversation_index,
    )
    return RenderResult(samples=mixture, sample_rate=fs, manifest=manifest, peak_scale=peak_scale)
