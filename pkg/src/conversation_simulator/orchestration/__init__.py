"""
Orchestration

Deterministic, sharded, parallel dataset generation and its throughput
benchmark.
"""

from .benchmark import BENCHMARK_COLUMNS, benchmark
from .pipeline import (
    DatasetGenerator,
    DatasetSummary,
    Shard,
    ShardResult,
    generate_dataset,
    load_corpus,
    merge_shards,
    plan_shards,
    run_shard,
    session_id_for,
)
from .seeding import conversation_rng, conversation_seed

__all__ = [
    "BENCHMARK_COLUMNS",
    "DatasetGenerator",
    "DatasetSummary",
    "Shard",
    "ShardResult",
    "benchmark",
    "conversation_rng",
    "conversation_seed",
    "generate_dataset",
    "load_corpus",
    "merge_shards",
    "plan_shards",
    "run_shard",
    "session_id_for",
]
