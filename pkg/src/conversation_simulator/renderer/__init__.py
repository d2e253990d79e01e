"""Waveform rendering of conversation plans."""

from .renderer import PEAK_LIMIT, RenderResult, SourceLoader, render, speaker_rirs

__all__ = ["PEAK_LIMIT", "RenderResult", "SourceLoader", "render", "speaker_rirs"]
