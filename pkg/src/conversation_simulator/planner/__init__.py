"""Conversation planning: the generative turn-taking loop and plan validation."""

from .builder import MAX_PLACEMENTS, build_plan, plan_to_session_manifest
from .validation import validate_plan

__all__ = [
    "MAX_PLACEMENTS",
    "build_plan",
    "plan_to_session_manifest",
    "validate_plan",
]
