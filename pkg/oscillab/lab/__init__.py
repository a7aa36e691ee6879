"""
The experiment lab: configuration, the Monte Carlo and exact engines, report
files and the command line.
"""

from .config import (
    BandSpec,
    LabConfig,
    MeasureSpec,
    ProcessSpec,
    ScheduleSpec,
    build_process,
    load_config,
    resolve_alphas,
    resolve_bands,
)
from .summary import AlternationStats, BandStats, RunSummary, build_reports, trace_times
from .engine import PathResults, run_monte_carlo
from .exact import run_exact
from .reports import emit_mdl_reports, emit_reports

__all__ = [
    "BandSpec",
    "LabConfig",
    "MeasureSpec",
    "ProcessSpec",
    "ScheduleSpec",
    "build_process",
    "load_config",
    "resolve_alphas",
    "resolve_bands",
    "AlternationStats",
    "BandStats",
    "RunSummary",
    "build_reports",
    "trace_times",
    "PathResults",
    "run_monte_carlo",
    "run_exact",
    "emit_mdl_reports",
    "emit_reports",
]
