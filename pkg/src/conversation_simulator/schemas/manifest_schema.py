"""
Shared Manifest Record Definitions

Raw JSON-lines record shapes for the on-disk manifest formats. The pydantic
models in conversation_simulator.models validate these records; the
docs/schemas/*.schema.json files describe the same shapes for other tools.
"""

from typing import List, Optional, TypedDict, Union


class AudioRefDict(TypedDict):
    """Span of an audio file."""
    path: str
    offset: float
    duration: float


class UtteranceRecordDict(TypedDict, total=False):
    """One line of an utterance manifest."""
    id: str
    speaker: str
    audio: AudioRefDict
    sample_rate: int
    words: Optional[List[List[Union[str, float]]]]
    text: Optional[str]


class SupervisionDict(TypedDict, total=False):
    """One supervision inside a session record."""
    speaker: str
    onset: float
    duration: float
    source_id: Optional[str]
    transition: Optional[int]
    text: Optional[str]


class SessionRecordDict(TypedDict, total=False):
    """One line of a session manifest."""
    session_id: str
    audio_path: Optional[str]
    duration: float
    sample_rate: int
    supervisions: List[SupervisionDict]
    conversation_index: Optional[int]
    seed: Optional[int]


class NoiseRecordDict(TypedDict):
    """One line of a noise manifest."""
    id: str
    audio: AudioRefDict
    sample_rate: int
