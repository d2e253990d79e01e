"""Descriptive statistics of annotated sessions."""

from .report import StatsAccumulator, StatsReport, compute_stats, format_report_table, sweep_intervals

__all__ = ["StatsAccumulator", "StatsReport", "compute_stats", "format_report_table", "sweep_intervals"]
