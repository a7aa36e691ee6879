"""
Seeded Monte Carlo engine.

Trials are split into fixed batches by index. A batch advances all of its
paths together through the process's batch kernel, one symbol column per
step, and retires paths as soon as they settle (their tallies can no longer
change). Processes without a kernel, or measures that are not i.i.d., run
path by path on the same per-trial streams.

Each batch returns per-path results; batches are concatenated in index order
before anything is summed, so neither the worker count nor the batch size
changes a single output bit.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import logging
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..bounds import Estimate
from ..crossings import AlternationScan, AlternationTracker, UpcrossingScan, UpcrossingTracker
from ..errors import ConfigError
from ..martingale import MartingaleProcess
from ..measure import PrefixMeasure, SymbolStreams, sample_path
from .config import (
    BandSpec,
    LabConfig,
    build_process,
    resolve_alphas,
    resolve_bands,
    schedule_bands,
)
from .summary import (
    AlternationStats,
    BandStats,
    RunSummary,
    build_reports,
    trace_times,
)

logger = logging.getLogger(__name__)


@dataclass
class PathResults:
    """Per-path outcomes of a block of trials."""

    upcrossings: np.ndarray     # (bands, n)
    in_progress: np.ndarray     # (bands, n) bool
    alternations: np.ndarray    # (alphas, n)
    final: np.ndarray           # (n,) X at the horizon
    trace: np.ndarray           # (trace points, n)

    @classmethod
    def empty(cls, n_bands: int, n_alphas: int, n_trace: int, n: int) -> "PathResults":
        return cls(
            upcrossings=np.zeros((n_bands, n), dtype=np.int64),
            in_progress=np.zeros((n_bands, n), dtype=bool),
            alternations=np.zeros((n_alphas, n), dtype=np.int64),
            final=np.zeros(n),
            trace=np.zeros((n_trace, n)),
        )

    @classmethod
    def concat(cls, parts: Sequence["PathResults"]) -> "PathResults":
        return cls(
            upcrossings=np.concatenate([p.upcrossings for p in parts], axis=1),
            in_progress=np.concatenate([p.in_progress for p in parts], axis=1),
            alternations=np.concatenate([p.alternations for p in parts], axis=1),
            final=np.concatenate([p.final for p in parts]),
            trace=np.concatenate([p.trace for p in parts], axis=1),
        )


@dataclass
class BatchJob:
    process: MartingaleProcess
    measure: PrefixMeasure
    bands: Tuple[Tuple[float, float], ...]
    alphas: Tuple[float, ...]
    times: Tuple[int, ...]
    seed: int
    start: int
    stop: int
    horizon: int


# =============================================================================
# BATCH RUNNERS
# =============================================================================

def _run_vectorized(job: BatchJob) -> PathResults:
    probs = job.measure.iid_probs
    n = job.stop - job.start
    out = PathResults.empty(len(job.bands), len(job.alphas), len(job.times), n)
    kernel = job.process.batch(n, probs)
    streams = SymbolStreams(job.seed, range(job.start, job.stop), probs)
    ups = [UpcrossingTracker(n, c, eps) for c, eps in job.bands]
    alts = [AlternationTracker(n, alpha) for alpha in job.alphas]
    alive = np.arange(n)
    slots = {t: i for i, t in enumerate(job.times)}

    def observe(x: np.ndarray) -> None:
        for tracker in ups:
            tracker.push(x)
        for tracker in alts:
            tracker.push(x)

    def flush(rows: np.ndarray, keep: np.ndarray, x: np.ndarray, t: int) -> None:
        """Write final results of the paths not in ``keep``."""
        gone = ~keep
        ids = rows[gone]
        for b, tracker in enumerate(ups):
            out.upcrossings[b, ids] = tracker.count[gone]
            out.in_progress[b, ids] = tracker.in_progress(x)[gone]
        for a, tracker in enumerate(alts):
            out.alternations[a, ids] = tracker.count[gone]
        out.final[ids] = x[gone]
        # settled values hold for the rest of the horizon
        for time_point, slot in slots.items():
            if time_point > t:
                out.trace[slot, ids] = x[gone]

    x = kernel.values
    observe(x)
    if 0 in slots:
        out.trace[slots[0]] = x
    for t in range(1, job.horizon + 1):
        if not alive.size:
            break
        kernel.step(streams.next_column())
        x = kernel.values
        observe(x)
        if t in slots:
            out.trace[slots[t], alive] = x
        settled = kernel.settled()
        if settled.any() and t < job.horizon:
            keep = ~settled
            flush(alive, keep, x, t)
            kernel.keep(keep)
            streams.keep(keep)
            for tracker in ups:
                tracker.keep(keep)
            for tracker in alts:
                tracker.keep(keep)
            alive = alive[keep]
    if alive.size:
        flush(alive, np.zeros(alive.size, dtype=bool), kernel.values, job.horizon)
    return out


def _run_scalar(job: BatchJob) -> PathResults:
    n = job.stop - job.start
    out = PathResults.empty(len(job.bands), len(job.alphas), len(job.times), n)
    for row, trial in enumerate(range(job.start, job.stop)):
        path = sample_path(job.measure, job.seed, trial, job.horizon)
        values = job.process.path_values(job.measure, path)
        scans = [UpcrossingScan.for_band(c, eps) for c, eps in job.bands]
        alt_scans = [AlternationScan(alpha) for alpha in job.alphas]
        for x in values:
            scans = [scan.push(x) for scan in scans]
            alt_scans = [scan.push(x) for scan in alt_scans]
        for b, scan in enumerate(scans):
            out.upcrossings[b, row] = scan.count
            out.in_progress[b, row] = scan.in_progress
        for a, scan in enumerate(alt_scans):
            out.alternations[a, row] = scan.count
        out.final[row] = values[-1]
        for slot, t in enumerate(job.times):
            out.trace[slot, row] = values[t]
    return out


def _run_batch(job: BatchJob) -> PathResults:
    started = time.perf_counter()
    vectorized = job.measure.iid_probs is not None and job.process.batch(1, job.measure.iid_probs) is not None
    result = _run_vectorized(job) if vectorized else _run_scalar(job)
    logger.debug(
        "Batch [%d, %d) done in %.2fs (%s)",
        job.start, job.stop, time.perf_counter() - started, "vectorized" if vectorized else "scalar",
    )
    return result


# =============================================================================
# AGGREGATION
# =============================================================================

def _tail(counts: np.ndarray, k_cap: int, step: int = 1) -> List[Estimate]:
    n = counts.size
    return [Estimate.from_counts(int(np.count_nonzero(counts >= step * k)), n) for k in range(k_cap + 1)]


def band_stats(
    band: BandSpec,
    upcrossings: np.ndarray,
    in_progress: np.ndarray,
    final: np.ndarray,
    x0: float,
    k_cap: int,
) -> BandStats:
    """Statistics of one band from per-path upcrossing counts and final values."""
    a = band.lo
    width = 2.0 * band.eps
    u = upcrossings.astype(np.float64)
    excess = np.maximum(final - a, 0.0)
    shortfall = np.maximum(a - final, 0.0)
    excess0 = max(x0 - a, 0.0)
    shortfall0 = max(a - x0, 0.0)
    integrands = {
        "doob_xu": shortfall / width,
        "doob_classic": excess / width,
        "doob_durrett": (excess - excess0) / width,
        "doob_downcrossing": (shortfall - shortfall0) / width + 1.0,
    }
    return BandStats(
        c=band.c,
        eps=band.eps,
        tail=_tail(upcrossings, k_cap),
        mean=Estimate.from_samples(u),
        in_progress=float(np.mean(in_progress)),
        mean_excess=float(np.mean(excess)),
        mean_shortfall=float(np.mean(shortfall)),
        bounds={name: float(np.mean(v)) for name, v in integrands.items()},
        paired={name: Estimate.from_samples(u - v) for name, v in integrands.items()},
    )


def summarize_paths(
    results: PathResults,
    config: LabConfig,
    bands: Sequence[BandSpec],
    alphas: Sequence[float],
    times: Sequence[int],
    x0: float,
) -> Tuple[List[BandStats], List[Estimate], List[AlternationStats], List[Estimate]]:
    band_list = [
        band_stats(band, results.upcrossings[i], results.in_progress[i], results.final, x0, config.k_cap)
        for i, band in enumerate(bands)
    ]
    events: List[Estimate] = []
    if schedule_bands(config) and bands:
        n = results.final.size
        ok = np.ones(n, dtype=bool)
        for m in range(1, len(bands) + 1):
            ok &= results.upcrossings[m - 1] >= m
            events.append(Estimate.from_counts(int(np.count_nonzero(ok)), n))
    alt_list = [
        AlternationStats(alpha, _tail(results.alternations[i], config.k_cap, step=2),
                         Estimate.from_samples(results.alternations[i].astype(np.float64)))
        for i, alpha in enumerate(alphas)
    ]
    trace = [Estimate.from_samples(results.trace[i]) for i in range(len(times))]
    return band_list, events, alt_list, trace


# =============================================================================
# ENTRY POINT
# =============================================================================

def run_monte_carlo(config: LabConfig, process: Optional[MartingaleProcess] = None,
                    measure: Optional[PrefixMeasure] = None) -> RunSummary:
    """Sample ``config.trials`` paths of length ``config.horizon`` and summarize them.

    Raises:
        ConfigError: The configuration does not resolve or horizon is 0.
    """
    if config.horizon < 1:
        raise ConfigError("Monte Carlo runs need horizon ≥ 1")
    if process is None or measure is None:
        process, measure = build_process(config)
    bands = resolve_bands(config, process)
    alphas = resolve_alphas(config)
    times = trace_times(config.horizon, config.trace_points)
    x0 = float(process.initial_value)

    logger.info(
        "Monte Carlo: process=%s measure=%r trials=%d horizon=%d seed=%d workers=%d",
        process.name, measure, config.trials, config.horizon, config.seed, config.workers,
    )
    started = time.perf_counter()
    jobs = [
        BatchJob(
            process=process,
            measure=measure,
            bands=tuple((b.c, b.eps) for b in bands),
            alphas=tuple(alphas),
            times=tuple(times),
            seed=config.seed,
            start=start,
            stop=min(start + config.batch_size, config.trials),
            horizon=config.horizon,
        )
        for start in range(0, config.trials, config.batch_size)
    ]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(_run_batch, jobs))
    else:
        parts = [_run_batch(job) for job in jobs]
    results = PathResults.concat(parts)

    band_list, events, alt_list, trace = summarize_paths(results, config, bands, alphas, times, x0)
    summary = RunSummary(
        mode="monte_carlo",
        process=process.name,
        measure=repr(measure),
        trials=config.trials,
        horizon=config.horizon,
        seed=config.seed,
        x0=x0,
        bands=band_list,
        events=events,
        alternations=alt_list,
        trace_times=times,
        trace=trace,
    )
    summary.reports = build_reports(summary, config)
    summary.wall_time = time.perf_counter() - started
    summary.paths = results
    logger.info(
        "Monte Carlo done in %.2fs: %d reports, %s",
        summary.wall_time, len(summary.reports), "VIOLATED" if summary.violated else "all hold",
    )
    return summary
