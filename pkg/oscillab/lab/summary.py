"""
Run summaries and the bound reports assembled from them.

Both engines fill the same ``RunSummary``; Monte Carlo estimates carry a
standard error, exact ones have std_err 0.
"""

from dataclasses import dataclass, field
import logging
import math
from typing import Any, Dict, List, Optional

from ..bounds import (
    BoundReport,
    Direction,
    Estimate,
    alternation_expectation_bound,
    alternation_probability_bound,
    assess,
    davis_bound,
    doob_tight_expectation,
    doob_xu_cap,
    dubins_bound,
    expected_upcrossings_lower_bound,
    oscillation_event_lower_bound,
)
from ..oscillator import ScheduleKind
from .config import LabConfig, UNIT_INTERVAL_KINDS, schedule_bands

logger = logging.getLogger(__name__)

# per-path integrands of the expected-upcrossing bounds, keyed by report name
DOOB_VARIANTS = ("doob_xu", "doob_classic", "doob_durrett", "doob_downcrossing")
IDENTITY_TOLERANCE = 1e-9


@dataclass
class BandStats:
    """Upcrossing statistics of one band (c − ε, c + ε)."""

    c: float
    eps: float
    tail: List[Estimate]                    # P[U ≥ k] for k = 0..k_cap
    mean: Estimate                          # E[U]
    in_progress: float                      # fraction with an open crossing at the horizon
    mean_excess: float                      # E[max{X_t − a, 0}], a = c − ε
    mean_shortfall: float                   # E[max{a − X_t, 0}]
    bounds: Dict[str, float] = field(default_factory=dict)   # mean bound value per Doob variant
    paired: Dict[str, Estimate] = field(default_factory=dict)  # E[U − per-path bound]

    @property
    def lo(self) -> float:
        return self.c - self.eps

    @property
    def hi(self) -> float:
        return self.c + self.eps

    def to_dict(self) -> Dict[str, Any]:
        return {
            "band_lo": self.lo,
            "band_hi": self.hi,
            "tail": [e.mean for e in self.tail],
            "tail_std_err": [e.std_err for e in self.tail],
            "mean_upcrossings": self.mean.mean,
            "mean_upcrossings_std_err": self.mean.std_err,
            "in_progress": self.in_progress,
            "mean_excess": self.mean_excess,
            "mean_shortfall": self.mean_shortfall,
        }


@dataclass
class AlternationStats:
    """α-alternation statistics; ``tail[k]`` is P[A(α) ≥ 2k]."""

    alpha: float
    tail: List[Estimate]
    mean: Estimate

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "tail": [e.mean for e in self.tail],
            "tail_std_err": [e.std_err for e in self.tail],
            "mean_alternations": self.mean.mean,
            "mean_alternations_std_err": self.mean.std_err,
        }


@dataclass
class RunSummary:
    """Aggregates of one run. ``wall_time`` stays in memory only."""

    mode: str
    process: str
    measure: str
    trials: int
    horizon: int
    seed: int
    x0: float
    bands: List[BandStats] = field(default_factory=list)
    events: List[Estimate] = field(default_factory=list)    # P(E_{m,m}) for m = 1..
    alternations: List[AlternationStats] = field(default_factory=list)
    trace_times: List[int] = field(default_factory=list)
    trace: List[Estimate] = field(default_factory=list)     # E[X_t] at trace_times
    reports: List[BoundReport] = field(default_factory=list)
    max_defect: Optional[float] = None
    expectation_defect: Optional[float] = None
    wall_time: float = 0.0
    paths: Optional[Any] = field(default=None, repr=False)   # per-path results, Monte Carlo only

    @property
    def violated(self) -> bool:
        return any(report.violated for report in self.reports)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "process": self.process,
            "measure": self.measure,
            "trials": self.trials,
            "horizon": self.horizon,
            "seed": self.seed,
            "x0": self.x0,
            "bands": [band.to_dict() for band in self.bands],
            "events": [e.mean for e in self.events],
            "events_std_err": [e.std_err for e in self.events],
            "alternations": [alt.to_dict() for alt in self.alternations],
            "trace_times": list(self.trace_times),
            "trace": [e.mean for e in self.trace],
            "reports": [report.to_dict() for report in self.reports],
            "max_defect": self.max_defect,
            "expectation_defect": self.expectation_defect,
            "violated": self.violated,
        }


def trace_times(horizon: int, points: int) -> List[int]:
    """Evenly spaced times 0..horizon, always including both ends."""
    if horizon == 0:
        return [0]
    step = max(1, math.ceil(horizon / points))
    times = list(range(0, horizon, step))
    times.append(horizon)
    return times


# =============================================================================
# REPORT ASSEMBLY
# =============================================================================

def _doob_reports(band: BandStats, tolerance: Optional[float]) -> List[BoundReport]:
    reports = []
    for name in DOOB_VARIANTS:
        if name not in band.paired:
            continue
        diff = band.paired[name]
        # verdict on E[U − bound]; the 3σ band is the CI of the paired difference
        estimate = Estimate(band.mean.mean, diff.std_err, band.mean.n)
        reports.append(assess(
            name, band.bounds[name], estimate, Direction.UPPER,
            tolerance=tolerance if name == "doob_xu" else None, band=(band.lo, band.hi),
        ))
    return reports


def build_reports(summary: RunSummary, config: LabConfig) -> List[BoundReport]:
    """Every bound that applies to the configured process, against the summary."""
    kind = config.process.kind
    tight = kind == "doob_tight"
    tolerance = config.tight_tolerance if tight else None
    reports: List[BoundReport] = []

    for band in summary.bands:
        if band.lo > 0.0 and summary.x0 >= 0.0:
            for k in range(1, len(band.tail)):
                theoretical = dubins_bound(band.c, band.eps, k, summary.x0)
                reports.append(assess(
                    "dubins", theoretical, band.tail[k], Direction.UPPER,
                    tolerance=tolerance, band=(band.lo, band.hi), k=k,
                ))
            # a nonnegative process has E[max{a − X_t, 0}] ≤ a
            reports.append(assess(
                "doob_xu_cap", doob_xu_cap(band.c, band.eps), band.mean, Direction.UPPER,
                tolerance=tolerance, band=(band.lo, band.hi),
            ))
        reports.extend(_doob_reports(band, tolerance))

    if tight and summary.bands:
        band = summary.bands[0]
        reports.append(assess(
            "doob_tight_expectation", doob_tight_expectation(band.lo, band.hi), band.mean,
            Direction.UPPER, tolerance=tolerance, band=(band.lo, band.hi),
        ))
        if summary.mode == "exact" and "doob_xu" in band.bounds:
            # with doob_xu above: E[U_t] = E[max{a − X_t, 0}]/(b − a) at every t
            reports.append(assess(
                "tightness_identity", band.bounds["doob_xu"], band.mean, Direction.LOWER,
                tolerance=IDENTITY_TOLERANCE, band=(band.lo, band.hi),
            ))

    # limits as t → ∞; an exact horizon is far too short to approach them
    if kind == "oscillator" and schedule_bands(config) and summary.mode == "monte_carlo":
        schedule = config.schedule.build()
        for m, event in enumerate(summary.events, start=1):
            reports.append(assess(
                "oscillation_event", oscillation_event_lower_bound(schedule, m), event,
                Direction.LOWER, k=m,
            ))
        if schedule.kind is ScheduleKind.FINITE and summary.bands:
            delta, m = schedule.params
            band = summary.bands[-1]
            if len(summary.bands) == int(m):
                reports.append(assess(
                    "expected_upcrossings", expected_upcrossings_lower_bound(int(m), delta), band.mean,
                    Direction.LOWER, band=(band.lo, band.hi), k=int(m),
                ))

    if kind in UNIT_INTERVAL_KINDS:
        for alt in summary.alternations:
            for k in range(1, len(alt.tail)):
                reports.append(assess(
                    "alternation_probability", alternation_probability_bound(alt.alpha, k), alt.tail[k],
                    Direction.UPPER, k=k,
                ))
                reports.append(assess(
                    "davis", davis_bound(alt.alpha, k), alt.tail[k], Direction.UPPER, k=k,
                ))
            reports.append(assess(
                "alternation_expectation", alternation_expectation_bound(alt.alpha), alt.mean, Direction.UPPER,
            ))

    violations = sum(1 for r in reports if r.violated)
    logger.info("Assembled %d bound reports, %d violated", len(reports), violations)
    return reports
