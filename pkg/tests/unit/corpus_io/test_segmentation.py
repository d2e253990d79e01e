"""Unit tests for pause-boundary segmentation."""

from __future__ import annotations

import numpy as np
import pytest

from conversation_simulator.corpus_io import split_at_pauses, split_corpus

from tests.helpers import create_sample_utterance


@pytest.mark.unit
@pytest.mark.corpus
class TestSplitAtPauses:
    """Tests for split_at_pauses."""

    def test_split_at_long_pause(self) -> None:
        """Test the gap-midpoint split with half-pause padding."""
        utt = create_sample_utterance(
            "u1", duration=1.4, offset=10.0, words=[("a", 0.0, 0.5), ("b", 0.9, 1.4)]
        )

        pieces = split_at_pauses(utt, min_pause=0.3)

        assert len(pieces) == 2
        first, second = pieces
        assert first.audio.offset == pytest.approx(10.0)
        assert first.duration == pytest.approx(0.65)
        assert second.audio.offset == pytest.approx(10.75)
        assert second.duration == pytest.approx(0.65)

    def test_pieces_carry_rebased_words(self) -> None:
        """Test ids, speaker, text and word times of the pieces."""
        utt = create_sample_utterance("u1", speaker="S", duration=1.4, words=[("a", 0.0, 0.5), ("b", 0.9, 1.4)])

        first, second = split_at_pauses(utt, min_pause=0.3)

        assert (first.id, second.id) == ("u1-000", "u1-001")
        assert second.speaker_id == "S"
        assert second.text == "b"
        assert second.words[0][1] == pytest.approx(0.15)
        assert second.words[0][2] == pytest.approx(0.65)

    def test_short_pauses_not_split(self) -> None:
        """Test that gaps under min_pause keep the utterance whole."""
        utt = create_sample_utterance("u1", duration=1.4, words=[("a", 0.0, 0.5), ("b", 0.7, 1.4)])

        assert split_at_pauses(utt, min_pause=0.3) == [utt]

    def test_without_words_unchanged(self) -> None:
        """Test that unaligned utterances pass through."""
        utt = create_sample_utterance("u1")

        assert split_at_pauses(utt, min_pause=0.3) == [utt]

    def test_non_positive_pause_rejected(self) -> None:
        """Test the min_pause guard."""
        with pytest.raises(ValueError):
            split_at_pauses(create_sample_utterance(), min_pause=0.0)

    def test_pieces_do_not_overlap(self) -> None:
        """Test that consecutive pieces are disjoint and ordered."""
        words = [("w0", 0.1, 0.4), ("w1", 1.0, 1.3), ("w2", 1.35, 1.8), ("w3", 2.6, 3.0)]
        utt = create_sample_utterance("u1", duration=3.2, words=words)

        pieces = split_at_pauses(utt, min_pause=0.5)

        assert len(pieces) == 3
        for a, b in zip(pieces, pieces[1:]):
            assert a.audio.offset + a.duration <= b.audio.offset + 1e-12

    def test_splitting_pieces_again_changes_nothing(self) -> None:
        """Test that every piece of a split comes back unchanged when split again."""
        rng = np.random.default_rng(4)
        for i in range(200):
            words = []
            t = float(rng.uniform(0.0, 0.3))
            for k in range(int(rng.integers(1, 12))):
                end = t + float(rng.uniform(0.1, 0.6))
                words.append((f"w{k}", t, end))
                t = end + float(rng.exponential(0.4))
            utt = create_sample_utterance(f"u{i}", duration=words[-1][2] + 0.2, words=words)

            for piece in split_at_pauses(utt, min_pause=0.5):
                assert split_at_pauses(piece, min_pause=0.5) == [piece]

    def test_split_corpus_preserves_order(self) -> None:
        """Test corpus-wide splitting."""
        split = create_sample_utterance("u1", duration=1.4, words=[("a", 0.0, 0.5), ("b", 0.9, 1.4)])
        whole = create_sample_utterance("u2")

        assert [u.id for u in split_corpus([split, whole], 0.3)] == ["u1-000", "u1-001", "u2"]
