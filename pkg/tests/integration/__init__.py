"""Integration tests that run the simulator end to end on synthetic corpora."""
