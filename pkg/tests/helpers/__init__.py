"""Test helper utilities."""

from .assertions import (
    assert_no_self_overlap,
    assert_probabilities_close,
    assert_trees_identical,
    assert_valid_plan,
    content_files,
)
from .fixtures import (
    SAMPLE_RATE,
    create_noise_corpus,
    create_placement,
    create_sample_utterance,
    create_session_manifest,
    create_speaker_pools,
    create_synthetic_corpus,
    create_tone,
    write_test_wav,
)

__all__ = [
    # Assertions
    "assert_no_self_overlap",
    "assert_probabilities_close",
    "assert_trees_identical",
    "assert_valid_plan",
    "content_files",
    # Fixtures
    "SAMPLE_RATE",
    "create_noise_corpus",
    "create_placement",
    "create_sample_utterance",
    "create_session_manifest",
    "create_speaker_pools",
    "create_synthetic_corpus",
    "create_tone",
    "write_test_wav",
]
