"""
Shoebox Room Impulse Responses

Image-source RIR synthesis with one frequency-independent absorption
coefficient per room, plus the per-session room and position sampling.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..errors import GeometryError

logger = logging.getLogger(__name__)

MAX_POSITION_ATTEMPTS = 1000

Vector3 = Tuple[float, float, float]


class RoomSpec(BaseModel):
    """Shoebox room geometry and wall behaviour."""

    model_config = ConfigDict(frozen=True)

    dimensions: Vector3 = Field(..., description="(Lx, Ly, Lz) in meters")
    absorption: float = Field(..., gt=0, lt=1, description="Energy fraction absorbed per reflection")
    max_order: int = Field(6, ge=0, description="Highest total reflection count")
    speed_of_sound: float = Field(343.0, gt=0, description="m/s")

    @field_validator("dimensions")
    @classmethod
    def validate_dimensions(cls, v: Vector3) -> Vector3:
        if any(not np.isfinite(d) or d <= 0 for d in v):
            raise ValueError(f"room dimensions must be positive, got {v}")
        return v


class ImpulseResponse(BaseModel):
    """Discrete impulse response at a given sample rate."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sample_rate: int = Field(..., gt=0)
    taps: np.ndarray

    @field_validator("taps")
    @classmethod
    def validate_taps(cls, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("taps must be a non-empty 1-D array")
        if not np.all(np.isfinite(v)):
            raise ValueError("taps must be finite")
        if not np.any(v != 0):
            raise ValueError("impulse response has no nonzero tap")
        return v

    @property
    def length(self) -> int:
        return int(self.taps.size)


def _check_inside(point: np.ndarray, dims: np.ndarray, label: str) -> None:
    if point.shape != (3,) or not np.all(np.isfinite(point)):
        raise GeometryError(f"{label} must be a finite 3-vector, got {point.tolist()}")
    if np.any(point <= 0) or np.any(point >= dims):
        raise GeometryError(f"{label} {point.tolist()} is not strictly inside room {dims.tolist()}")


def _axis_images(source: float, length: float, max_order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Mirrored coordinates along one axis and their reflection counts."""
    n = np.arange(-max_order, max_order + 1)
    positions, counts = [], []
    for parity in (0, 1):
        reflections = np.abs(2 * n - parity)
        keep = reflections <= max_order
        positions.append((1 - 2 * parity) * source + 2 * n[keep] * length)
        counts.append(reflections[keep])
    return np.concatenate(positions), np.concatenate(counts)


def image_method_rir(
    room: RoomSpec,
    source: Sequence[float],
    mic: Sequence[float],
    sample_rate: int,
) -> ImpulseResponse:
    """
    Image-source RIR between a source and a microphone.

    Every image with total reflection count <= room.max_order adds
    (1 - absorption)**order / (4 pi d) at round(d / c * fs).

    Raises:
        GeometryError: Source or mic outside the room, or coincident
    """
    dims = np.asarray(room.dimensions, dtype=np.float64)
    src = np.asarray(source, dtype=np.float64)
    mic_pos = np.asarray(mic, dtype=np.float64)
    _check_inside(src, dims, "source")
    _check_inside(mic_pos, dims, "microphone")
    if np.linalg.norm(src - mic_pos) < 1e-9:
        raise GeometryError(f"source and microphone coincide at {src.tolist()}")

    axes = [_axis_images(src[k], dims[k], room.max_order) for k in range(3)]
    px, py, pz = np.meshgrid(axes[0][0], axes[1][0], axes[2][0], indexing="ij")
    cx, cy, cz = np.meshgrid(axes[0][1], axes[1][1], axes[2][1], indexing="ij")
    order = (cx + cy + cz).ravel()
    keep = order <= room.max_order
    images = np.stack([px.ravel()[keep], py.ravel()[keep], pz.ravel()[keep]], axis=1)
    order = order[keep]

    distances = np.linalg.norm(images - mic_pos, axis=1)
    delays = np.rint(distances / room.speed_of_sound * sample_rate).astype(np.int64)
    amplitudes = (1.0 - room.absorption) ** order / (4.0 * np.pi * distances)

    taps = np.zeros(int(delays.max()) + 1, dtype=np.float64)
    np.add.at(taps, delays, amplitudes)
    logger.debug(f"RIR with {len(order)} images, {taps.size} taps, absorption {room.absorption:.3f}")
    return ImpulseResponse(sample_rate=sample_rate, taps=taps)


def sample_room(
    dim_min: Sequence[float],
    dim_max: Sequence[float],
    absorption_range: Tuple[float, float],
    max_order: int,
    speed_of_sound: float,
    rng: np.random.Generator,
) -> RoomSpec:
    """Room with dimensions and absorption drawn uniformly from the given ranges."""
    low = np.asarray(dim_min, dtype=np.float64)
    high = np.asarray(dim_max, dtype=np.float64)
    dims = rng.uniform(low, high)
    absorption = float(rng.uniform(absorption_range[0], absorption_range[1]))
    return RoomSpec(
        dimensions=tuple(float(d) for d in dims),
        absorption=absorption,
        max_order=max_order,
        speed_of_sound=speed_of_sound,
    )


def sample_positions(
    room: RoomSpec,
    num_sources: int,
    wall_margin: float,
    min_distance: float,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    One microphone and `num_sources` source positions.

    Positions are uniform inside the room shrunk by `wall_margin`; each
    source is redrawn until it is at least `min_distance` from the mic.
    """
    dims = np.asarray(room.dimensions, dtype=np.float64)
    if np.any(dims <= 2 * wall_margin):
        raise GeometryError(f"room {dims.tolist()} leaves no space inside a {wall_margin} m wall margin")
    low, high = np.full(3, wall_margin), dims - wall_margin

    mic = rng.uniform(low, high)
    sources: List[np.ndarray] = []
    for index in range(num_sources):
        for _ in range(MAX_POSITION_ATTEMPTS):
            candidate = rng.uniform(low, high)
            if np.linalg.norm(candidate - mic) >= min_distance:
                sources.append(candidate)
                break
        else:
            raise GeometryError(
                f"could not place source {index} at least {min_distance} m from the microphone"
            )
    return mic, sources
