"""
Throughput Benchmark

Runs generate_dataset once per (worker count, repetition), each run into
its own subdirectory, and reports the median wall time per worker count.
"""

import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import pandas as pd

from ..config import SimulationConfig
from .pipeline import generate_dataset

logger = logging.getLogger(__name__)

BENCHMARK_COLUMNS = ["workers", "wall_s", "hours_per_min"]


def benchmark(
    config: SimulationConfig,
    worker_counts: Sequence[int],
    repetitions: int = 1,
    output_csv: Optional[Union[str, Path]] = None,
) -> pd.DataFrame:
    """
    Measure generation throughput against worker count.

    Args:
        config: Base configuration; num_workers and output_dir are
            replaced per run
        worker_counts: Worker counts to measure, in order
        repetitions: Runs per worker count; the median wall time is kept
        output_csv: Optional CSV destination

    Returns:
        DataFrame with columns workers, wall_s, hours_per_min
    """
    if not worker_counts:
        raise ValueError("worker_counts must not be empty")
    if repetitions < 1:
        raise ValueError(f"repetitions must be at least 1, got {repetitions}")

    base_dir = Path(config.output_dir)
    runs = []
    for workers in worker_counts:
        for repetition in range(repetitions):
            run_config = config.model_copy(
                update={
                    "num_workers": workers,
                    "output_dir": base_dir / f"workers_{workers:03d}" / f"rep_{repetition:02d}",
                }
            )
            summary = generate_dataset(run_config)
            logger.info(
                f"Benchmark: {workers} workers, repetition {repetition + 1}/{repetitions}: "
                f"{summary.wall_time_s:.2f}s for {summary.total_hours:.3f} h"
            )
            runs.append({"workers": workers, "wall_s": summary.wall_time_s, "hours": summary.total_hours})

    frame = pd.DataFrame(runs)
    table = (
        frame.groupby("workers", sort=False)
        .agg(wall_s=("wall_s", "median"), hours=("hours", "median"))
        .reset_index()
    )
    table["hours_per_min"] = table["hours"] / (table["wall_s"] / 60.0)
    table = table[BENCHMARK_COLUMNS]

    if output_csv is not None:
        output_csv = Path(output_csv)
        output_csv.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(output_csv, index=False)
        logger.info(f"Wrote benchmark table to {output_csv}")
    return table
