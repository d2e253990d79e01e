"""Unit tests for seeding, sharded generation and benchmarking."""
