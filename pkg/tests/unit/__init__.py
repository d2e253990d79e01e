"""Unit tests on small synthetic inputs."""
