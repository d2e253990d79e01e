"""Conversation Simulator - long-form multi-talker mixtures with exact ground truth."""

__version__ = "0.1.0"
