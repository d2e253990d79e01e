"""
Data Models for the Conversation Simulator

Pydantic models for seed corpora, session manifests and conversation plans.
"""

from .plan import ConversationPlan, PlacedUtterance
from .session import SessionManifest, Supervision
from .utterance import AudioRef, NoiseRecording, SourceUtterance, SpeakerPool

__all__ = [
    "AudioRef",
    "ConversationPlan",
    "NoiseRecording",
    "PlacedUtterance",
    "SessionManifest",
    "SourceUtterance",
    "SpeakerPool",
    "Supervision",
]
