"""Tests for conversation-simulator."""
