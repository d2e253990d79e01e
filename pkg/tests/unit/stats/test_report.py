"""Unit tests for session statistics."""

from __future__ import annotations

import numpy as np
import pytest

from conversation_simulator.errors import ManifestValidationError
from conversation_simulator.planner import build_plan, plan_to_session_manifest
from conversation_simulator.stats import StatsAccumulator, compute_stats, format_report_table, sweep_intervals
from conversation_simulator.turntaking import get_recipe

from tests.helpers import SAMPLE_RATE, create_session_manifest, create_speaker_pools


def frame_oracle(intervals, frame: float = 0.01):
    """Speech and overlap time counted on a frame grid."""
    end = max(e for _, e in intervals)
    centers = (np.arange(int(np.ceil(end / frame))) + 0.5) * frame
    active = sum(((centers >= s) & (centers < e)).astype(int) for s, e in intervals)
    return float((active >= 1).sum() * frame), float((active >= 2).sum() * frame)


@pytest.mark.unit
@pytest.mark.stats
class TestSweepIntervals:
    """Tests for sweep_intervals."""

    def test_two_overlapping(self) -> None:
        """Test union and overlap of [0, 4] and [3, 6]."""
        assert sweep_intervals([(0.0, 4.0), (3.0, 6.0)]) == (6.0, 1.0)

    def test_empty(self) -> None:
        """Test no intervals."""
        assert sweep_intervals([]) == (0.0, 0.0)

    def test_shared_boundaries(self) -> None:
        """Test touching and identical intervals."""
        union, overlap = sweep_intervals([(0.0, 1.0), (1.0, 2.0), (1.0, 2.0)])

        assert union == pytest.approx(2.0)
        assert overlap == pytest.approx(1.0)

    def test_matches_frame_oracle(self, rng: np.random.Generator) -> None:
        """Test the exact sweep against a 10 ms frame count on grid-aligned intervals."""
        for _ in range(20):
            starts = rng.integers(0, 500, size=8)
            lengths = rng.integers(1, 200, size=8)
            intervals = [(s / 100.0, (s + n) / 100.0) for s, n in zip(starts, lengths)]

            union, overlap = sweep_intervals(intervals)
            oracle_union, oracle_overlap = frame_oracle(intervals)

            assert union == pytest.approx(oracle_union, abs=1e-6)
            assert overlap == pytest.approx(oracle_overlap, abs=1e-6)


@pytest.mark.unit
@pytest.mark.stats
class TestComputeStats:
    """Tests for compute_stats."""

    def test_overlap_example(self) -> None:
        """Test speech, overlap and the transition histogram of one IR."""
        manifest = create_session_manifest([("A", 0.0, 4.0), ("B", 3.0, 3.0)])

        report = compute_stats([manifest])

        assert report.total_speech == pytest.approx(6.0)
        assert report.overlap_time == pytest.approx(1.0)
        assert report.overlap_ratio == pytest.approx(1.0 / 6.0)
        assert report.total_speaker_time == pytest.approx(7.0)
        assert report.transition_histogram == {"TH": 0, "TS": 0, "IR": 1, "BC": 0}
        assert report.mean_overlap_ratio_ir == pytest.approx(1.0 / 3.0)

    def test_silence(self) -> None:
        """Test silence in a session longer than its speech."""
        manifest = create_session_manifest([("A", 0.0, 10.0)], duration=12.0)

        report = compute_stats([manifest])

        assert report.total_speech == pytest.approx(10.0)
        assert report.total_silence == pytest.approx(2.0)
        assert report.mean_gap_th is None

    def test_gaps_and_speakers(self) -> None:
        """Test mean gaps over several sessions."""
        sessions = [
            create_session_manifest([("A", 0.0, 1.0), ("A", 1.5, 1.0), ("B", 3.0, 1.0)], session_id="s1"),
            create_session_manifest([("C", 0.0, 1.0), ("A", 1.1, 1.0)], session_id="s2"),
        ]

        report = compute_stats(sessions)

        assert report.sessions == 2
        assert report.speakers == 3
        assert report.mean_gap_th == pytest.approx(0.5)
        assert report.mean_gap_ts == pytest.approx(0.3)

    def test_empty(self) -> None:
        """Test statistics of no sessions."""
        report = compute_stats([])

        assert report.sessions == 0
        assert report.overlap_ratio == 0.0

    def test_merge_is_associative(self) -> None:
        """Test that grouping of accumulator merges does not matter."""
        accumulators = []
        for i, segments in enumerate(
            [[("A", 0.0, 2.0), ("B", 1.5, 2.0)], [("A", 0.0, 1.0), ("B", 1.2, 0.5)], [("C", 0.0, 3.0)]]
        ):
            acc = StatsAccumulator()
            acc.add_session(create_session_manifest(segments, session_id=f"s{i}"), bc_max_duration=1.0)
            accumulators.append(acc)
        a, b, c = accumulators

        left = a.merge(b).merge(c).report()
        right = a.merge(b.merge(c)).report()

        assert left.transition_histogram == right.transition_histogram
        for field in ("sessions", "speakers", "total_duration", "total_speech", "overlap_time", "mean_gap_ts"):
            assert getattr(left, field) == pytest.approx(getattr(right, field))

    def test_speaker_relabeling_changes_nothing(self) -> None:
        """Test overlap, speech and transition counts under a permutation of speaker ids."""
        pools = create_speaker_pools({"A": [2.1, 3.7, 0.4], "B": [1.3, 5.2, 0.6], "C": [2.9, 0.8, 4.4]})
        relabel = {"A": "C", "B": "A", "C": "B"}
        manifests, relabeled = [], []
        for i in range(50):
            plan = build_plan(get_recipe("callhome-ov"), pools, 3, 30.0, rng=np.random.default_rng(i), session_id=f"s{i}")
            manifest = plan_to_session_manifest(plan, sample_rate=SAMPLE_RATE)
            manifests.append(manifest)
            relabeled.append(
                create_session_manifest(
                    [(relabel[s.speaker_id], s.onset, s.duration) for s in manifest.supervisions],
                    session_id=manifest.session_id,
                    duration=manifest.duration,
                )
            )

        original, permuted = compute_stats(manifests), compute_stats(relabeled)

        assert original.overlap_time > 0
        assert permuted.overlap_time == pytest.approx(original.overlap_time, abs=1e-9)
        assert permuted.overlap_ratio == pytest.approx(original.overlap_ratio, abs=1e-12)
        assert permuted.total_speech == pytest.approx(original.total_speech, abs=1e-9)
        assert permuted.transition_histogram == original.transition_histogram

    def test_inconsistent_session_named(self, mocker) -> None:
        """Test that classification errors name the session."""
        manifest = create_session_manifest([("A", 0.0, 2.0), ("B", 1.0, 2.0)], session_id="broken")
        mocker.patch(
            "conversation_simulator.stats.report.classify_transitions",
            side_effect=ManifestValidationError("broken", "speaker 'A' overlaps itself"),
        )

        with pytest.raises(ManifestValidationError) as exc_info:
            compute_stats([manifest])

        assert exc_info.value.record_id == "broken"

    def test_table(self) -> None:
        """Test the human-readable table."""
        table = format_report_table(compute_stats([create_session_manifest([("A", 0.0, 4.0), ("B", 3.0, 3.0)])]))

        assert "Overlap ratio:                 0.1667" in table
        assert "Mean TH gap:                   n/a" in table
        assert table.startswith("=" * 60)
