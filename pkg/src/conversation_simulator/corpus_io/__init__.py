"""
Corpus I/O

Seed-corpus ingestion and every on-disk artifact format: utterance, session
and noise manifests, RTTM and WAV.
"""

from .audio import SourceAudioLoader, read_wav, write_wav
from .manifests import (
    group_by_speaker,
    load_noise_manifest,
    load_session_manifests,
    load_utterance_manifest,
    load_utterances,
    merge_speaker_pools,
    resolve_audio_paths,
    write_noise_manifest,
    write_session_manifests,
    write_utterance_manifest,
)
from .rttm import format_rttm_lines, read_rttm, write_rttm, write_rttm_file
from .segmentation import split_at_pauses, split_corpus

__all__ = [
    "SourceAudioLoader",
    "format_rttm_lines",
    "group_by_speaker",
    "load_noise_manifest",
    "load_session_manifests",
    "load_utterance_manifest",
    "load_utterances",
    "merge_speaker_pools",
    "read_rttm",
    "read_wav",
    "resolve_audio_paths",
    "split_at_pauses",
    "split_corpus",
    "write_noise_manifest",
    "write_rttm",
    "write_rttm_file",
    "write_session_manifests",
    "write_utterance_manifest",
    "write_wav",
]
