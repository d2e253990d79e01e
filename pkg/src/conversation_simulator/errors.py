"""
Simulator Exceptions

Every failure the library raises on purpose derives from SimulatorError.
Errors caused by a bad input value also derive from ValueError.
"""

from pathlib import Path
from typing import Optional, Union


class SimulatorError(Exception):
    """Base class for all simulator errors."""


class ConfigError(SimulatorError, ValueError):
    """Invalid or missing configuration."""


class ManifestParseError(SimulatorError, ValueError):
    """A manifest or annotation line could not be parsed."""

    def __init__(self, path: Union[str, Path], line_number: int, reason: str):
        self.path = str(path)
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"{self.path}:{line_number}: {reason}")

    def __reduce__(self):
        return (type(self), (self.path, self.line_number, self.reason))


class ManifestValidationError(SimulatorError, ValueError):
    """A parsed record violates a domain invariant."""

    def __init__(self, record_id: str, reason: str):
        self.record_id = record_id
        self.reason = reason
        super().__init__(f"Invalid record '{record_id}': {reason}")

    def __reduce__(self):
        return (type(self), (self.record_id, self.reason))


class SampleRateMismatchError(SimulatorError, ValueError):
    """Audio does not match the configured sample rate."""


class UnsupportedEncodingError(SimulatorError, ValueError):
    """WAV sample encoding is not supported."""


class SourceNotFoundError(SimulatorError, LookupError):
    """A placement references seed audio that cannot be resolved."""

    def __init__(self, source_id: str, reason: Optional[str] = None):
        self.source_id = source_id
        self.reason = reason
        message = f"Cannot resolve source audio '{source_id}'"
        if reason:
            message += f": {reason}"
        super().__init__(message)

    def __reduce__(self):
        return (type(self), (self.source_id, self.reason))


class GeometryError(SimulatorError, ValueError):
    """Room, source or microphone geometry is degenerate."""


class FittingError(SimulatorError, ValueError):
    """Turn-taking parameters cannot be estimated from the given events."""

    def __init__(self, message: str, kind: Optional[str] = None):
        self.kind = kind
        super().__init__(message)

    def __reduce__(self):
        return (type(self), (str(self), self.kind))


class PlanningError(SimulatorError, ValueError):
    """A conversation plan cannot be built from the given inputs."""


class GenerationError(SimulatorError):
    """A conversation failed inside a pipeline worker."""

    def __init__(self, conversation_index: int, message: str):
        self.conversation_index = conversation_index
        self.message = message
        super().__init__(f"Conversation {conversation_index} failed: {message}")

    def __reduce__(self):
        return (type(self), (self.conversation_index, self.message))


class ZeroPowerError(SimulatorError, ValueError):
    """A signal used as an SNR reference has no energy."""


class EmptyCorpusError(SimulatorError, ValueError):
    """An input corpus or manifest set contains no usable records."""
