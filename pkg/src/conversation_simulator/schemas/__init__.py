"""Record shapes of the JSON-lines manifest formats."""

from .manifest_schema import (
    AudioRefDict,
    NoiseRecordDict,
    SessionRecordDict,
    SupervisionDict,
    UtteranceRecordDict,
)

__all__ = [
    "AudioRefDict",
    "NoiseRecordDict",
    "SessionRecordDict",
    "SupervisionDict",
    "UtteranceRecordDict",
]
