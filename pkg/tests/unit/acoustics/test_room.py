"""Unit tests for image-source impulse responses and geometry sampling."""

from __future__ import annotations

import numpy as np
import pytest
from pydantic import ValidationError

from conversation_simulator.acoustics import ImpulseResponse, RoomSpec, image_method_rir, sample_positions, sample_room
from conversation_simulator.errors import GeometryError

SOURCE = (2.0, 5.0, 5.0)
MIC = (5.43, 5.0, 5.0)


@pytest.fixture
def room() -> RoomSpec:
    return RoomSpec(dimensions=(10.0, 10.0, 10.0), absorption=0.3, max_order=0)


@pytest.mark.unit
@pytest.mark.acoustics
class TestImageMethodRir:
    """Tests for image_method_rir."""

    def test_direct_path_tap(self, room: RoomSpec) -> None:
        """Test the single direct-path tap at 3.43 m and 343 m/s."""
        rir = image_method_rir(room, SOURCE, MIC, 16000)

        assert rir.length == 161
        assert np.flatnonzero(rir.taps).tolist() == [160]
        assert rir.taps[160] == pytest.approx(1.0 / (4.0 * np.pi * 3.43))

    def test_first_order_reflections(self, room: RoomSpec) -> None:
        """Test that order 1 adds the six wall images with one absorption each."""
        first_order = room.model_copy(update={"max_order": 1})
        side = 0.7 / np.hypot(3.43, 10.0)
        expected = (1.0 / 3.43 + 0.7 / 7.43 + 0.7 / 12.57 + 4 * side) / (4.0 * np.pi)

        rir = image_method_rir(first_order, SOURCE, MIC, 16000)

        assert np.count_nonzero(rir.taps) <= 7
        assert rir.taps.sum() == pytest.approx(expected)

    def test_higher_order_adds_energy_later(self, room: RoomSpec) -> None:
        """Test that more reflections lengthen the response and keep the direct tap."""
        low = image_method_rir(room.model_copy(update={"max_order": 1}), SOURCE, MIC, 16000)
        high = image_method_rir(room.model_copy(update={"max_order": 4}), SOURCE, MIC, 16000)

        assert high.length > low.length
        assert high.taps[160] == pytest.approx(low.taps[160])

    @pytest.mark.parametrize(
        "source, mic",
        [
            ((0.0, 5.0, 5.0), MIC),
            (SOURCE, (10.0, 5.0, 5.0)),
            (SOURCE, (5.0, 5.0, 11.0)),
            (SOURCE, SOURCE),
        ],
    )
    def test_invalid_geometry(self, room: RoomSpec, source, mic) -> None:
        """Test positions on or outside the walls and coincident points."""
        with pytest.raises(GeometryError):
            image_method_rir(room, source, mic, 16000)


@pytest.mark.unit
@pytest.mark.acoustics
class TestRoomSpec:
    """Tests for RoomSpec and ImpulseResponse validation."""

    @pytest.mark.parametrize("absorption", [0.0, 1.0, -0.2])
    def test_absorption_open_interval(self, absorption: float) -> None:
        """Test that absorption lies strictly between 0 and 1."""
        with pytest.raises(ValidationError):
            RoomSpec(dimensions=(5.0, 4.0, 3.0), absorption=absorption)

    def test_dimensions_positive(self) -> None:
        """Test degenerate room sizes."""
        with pytest.raises(ValidationError, match="positive"):
            RoomSpec(dimensions=(5.0, 0.0, 3.0), absorption=0.3)

    def test_impulse_response_needs_nonzero_tap(self) -> None:
        """Test that an all-zero response is rejected."""
        with pytest.raises(ValidationError, match="nonzero"):
            ImpulseResponse(sample_rate=16000, taps=np.zeros(8))


@pytest.mark.unit
@pytest.mark.acoustics
class TestRoomSampling:
    """Tests for room and position sampling."""

    def test_sample_room_in_ranges(self, rng: np.random.Generator) -> None:
        """Test dimensions and absorption drawn from their ranges."""
        for _ in range(50):
            room = sample_room((3.0, 3.0, 2.5), (8.0, 6.0, 3.5), (0.2, 0.8), 5, 343.0, rng)

            assert 3.0 <= room.dimensions[0] <= 8.0
            assert 2.5 <= room.dimensions[2] <= 3.5
            assert 0.2 <= room.absorption <= 0.8
            assert room.max_order == 5

    def test_positions_respect_margin_and_distance(self, rng: np.random.Generator) -> None:
        """Test wall margin and source-to-mic distance."""
        room = RoomSpec(dimensions=(6.0, 5.0, 3.0), absorption=0.4)

        mic, sources = sample_positions(room, 4, wall_margin=0.5, min_distance=1.0, rng=rng)

        assert len(sources) == 4
        for point in [mic, *sources]:
            assert np.all(point >= 0.5)
            assert np.all(point <= np.array(room.dimensions) - 0.5)
        for source in sources:
            assert np.linalg.norm(source - mic) >= 1.0

    def test_margin_too_large(self, rng: np.random.Generator) -> None:
        """Test a room too small for its wall margin."""
        room = RoomSpec(dimensions=(6.0, 5.0, 0.8), absorption=0.4)

        with pytest.raises(GeometryError, match="wall margin"):
            sample_positions(room, 2, wall_margin=0.5, min_distance=1.0, rng=rng)

    def test_unreachable_distance(self, rng: np.random.Generator) -> None:
        """Test a minimum distance larger than the room."""
        room = RoomSpec(dimensions=(2.0, 2.0, 2.0), absorption=0.4)

        with pytest.raises(GeometryError, match="could not place"):
            sample_positions(room, 1, wall_margin=0.1, min_distance=10.0, rng=rng)


@pytest.mark.unit
@pytest.mark.acoustics
class TestRirProperties:
    """Properties that hold for any room geometry."""

    ROOM_DIMS = (6.0, 5.0, 3.0)
    GEOMETRY = {"source": (1.5, 2.0, 1.2), "mic": (4.0, 3.0, 1.6), "sample_rate": 16000}

    def test_direct_path_over_random_geometries(self) -> None:
        """Test that the first tap sits at round(d / c * fs) for 100 sampled rooms."""
        rng = np.random.default_rng(11)
        for _ in range(100):
            room = sample_room((3.0, 3.0, 2.5), (10.0, 8.0, 4.0), (0.2, 0.8), 2, 343.0, rng)
            mic, (source,) = sample_positions(room, 1, wall_margin=0.5, min_distance=0.3, rng=rng)

            rir = image_method_rir(room, source, mic, 16000)

            expected = int(np.rint(np.linalg.norm(source - mic) / 343.0 * 16000))
            assert np.flatnonzero(rir.taps)[0] == expected

    def test_energy_non_increasing_in_absorption(self) -> None:
        """Test that more absorption never adds energy for a fixed geometry."""
        energies = []
        for absorption in np.linspace(0.05, 0.95, 19):
            room = RoomSpec(dimensions=self.ROOM_DIMS, absorption=absorption, max_order=3)
            energies.append(float(np.sum(image_method_rir(room, **self.GEOMETRY).taps ** 2)))

        assert np.all(np.diff(energies) <= 0)

    def test_reflections_vanish_near_full_absorption(self) -> None:
        """Test that only the direct path survives as absorption approaches 1."""
        direct = image_method_rir(RoomSpec(dimensions=self.ROOM_DIMS, absorption=0.5, max_order=0), **self.GEOMETRY)
        room = RoomSpec(dimensions=self.ROOM_DIMS, absorption=1.0 - 1e-9, max_order=3)

        rir = image_method_rir(room, **self.GEOMETRY)

        np.testing.assert_allclose(rir.taps[: direct.length], direct.taps, atol=1e-9)
        assert np.max(np.abs(rir.taps[direct.length :])) < 1e-9
