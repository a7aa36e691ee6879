"""
Oscillation-magnitude schedules f: ℕ → [0, 1).

A schedule is monotone decreasing. ``sum_bound`` certifies Σ_{i≥1} f(i)
(+inf for non-summable schedules). Values are computed vectorized over
integer arrays; implicit schedules are inverted by bisection with one fixed
iteration count for every entry, which keeps the inverted values exactly
monotone in t.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple
import math

import numpy as np

from ..errors import ConvergenceError, DomainError


# =============================================================================
# CONSTANTS
# =============================================================================

LOG_SQUARED_CAP = math.exp(-2.0)    # g(e^{-2}) = 0, so f(0) = e^{-2}
INVERSE_LOG_CAP = math.exp(-1.0)    # ε ln(1/ε) peaks at 1/e
BISECTION_FLOOR = 1e-300            # left end of every bisection bracket
BISECTION_TOLERANCE = 1e-12         # absolute bracket width at termination
BISECTION_MAX_ITER = 200
SUM_SLACK = 1e-9                    # allowed excess of partial sums over sum_bound


class ScheduleKind(Enum):
    FINITE = "finite"
    LOG_SQUARED = "log_squared"
    CONSTANT_BAND = "constant_band"
    INVERSE_LOG = "inverse_log"
    CUSTOM = "custom"


def invert_decreasing(
    g: Callable[[np.ndarray], np.ndarray],
    targets: np.ndarray,
    lo: float,
    hi: float,
) -> np.ndarray:
    """Solve g(ε) = target for a strictly decreasing g on (lo, hi].

    Returns the left bracket end, so g(result) ≥ target.
    """
    targets = np.asarray(targets, dtype=np.float64)
    left = np.full(targets.shape, lo)
    right = np.full(targets.shape, hi)
    width = hi - lo
    iterations = 0
    while width > BISECTION_TOLERANCE:
        if iterations >= BISECTION_MAX_ITER:
            raise ConvergenceError(f"bisection did not reach width {BISECTION_TOLERANCE} in {iterations} steps")
        mid = (left + right) / 2.0
        above = g(mid) > targets
        left = np.where(above, mid, left)
        right = np.where(above, right, mid)
        width /= 2.0
        iterations += 1
    return left


def _log_squared_g(delta: float) -> Callable[[np.ndarray], np.ndarray]:
    offset = math.e ** 2 / 4.0

    def g(eps: np.ndarray) -> np.ndarray:
        return 2.0 * delta * (1.0 / (eps * np.log(eps) ** 2) - offset)

    return g


def _inverse_log_g(a: float, b: float) -> Callable[[np.ndarray], np.ndarray]:
    def g(eps: np.ndarray) -> np.ndarray:
        return a / (eps * np.log(1.0 / eps)) - b

    return g


# =============================================================================
# SCHEDULE
# =============================================================================

@dataclass(frozen=True)
class Schedule:
    """Monotone decreasing magnitude function with summability metadata."""

    kind: ScheduleKind
    params: Tuple[float, ...]
    sum_bound: float
    fn: Optional[Callable[[int], float]] = field(default=None, repr=False)

    def values(self, t: np.ndarray) -> np.ndarray:
        """f evaluated elementwise on an integer array."""
        t = np.asarray(t, dtype=np.int64)
        if self.kind is ScheduleKind.FINITE:
            delta, m = self.params
            return np.where(t <= m, delta / (2.0 * m), 0.0)
        if self.kind is ScheduleKind.CONSTANT_BAND:
            return np.full(t.shape, self.params[0])
        if self.kind is ScheduleKind.LOG_SQUARED:
            (delta,) = self.params
            out = np.full(t.shape, LOG_SQUARED_CAP)
            positive = t > 0
            if positive.any():
                out[positive] = invert_decreasing(
                    _log_squared_g(delta), t[positive].astype(np.float64), BISECTION_FLOOR, LOG_SQUARED_CAP
                )
            return out
        if self.kind is ScheduleKind.INVERSE_LOG:
            a, b = self.params
            g = _inverse_log_g(a, b)
            floor = float(g(np.array(INVERSE_LOG_CAP)))
            targets = np.maximum(t.astype(np.float64), floor)
            return invert_decreasing(g, targets, BISECTION_FLOOR, INVERSE_LOG_CAP)
        return np.array([float(self.fn(int(i))) for i in t.ravel()]).reshape(t.shape)

    def __call__(self, t: int) -> float:
        return _cached_value(self, int(t))

    def table(self, n: int) -> np.ndarray:
        """[f(0), f(1), …, f(n)]."""
        return self.values(np.arange(n + 1))

    def partial_sum(self, n: int) -> float:
        """Σ_{i=1}^{n} f(i)."""
        return math.fsum(self.table(n)[1:].tolist())

    @property
    def delta(self) -> Optional[float]:
        """δ with sum_bound = δ/2, for summable schedules."""
        return 2.0 * self.sum_bound if math.isfinite(self.sum_bound) else None

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "params": list(self.params),
            "sum_bound": self.sum_bound if math.isfinite(self.sum_bound) else "inf",
        }


@lru_cache(maxsize=65536)
def _cached_value(schedule: Schedule, t: int) -> float:
    return float(schedule.values(np.array([t]))[0])


# =============================================================================
# CONSTRUCTORS
# =============================================================================

def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 0.5:
        raise DomainError(f"delta={delta!r} must lie in (0, 1/2)")


def schedule_finite(delta: float, m: int) -> Schedule:
    """f(t) = δ/(2m) for t ≤ m, 0 afterwards; Σ f = δ/2."""
    _check_delta(delta)
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"finite schedule needs m ≥ 1, got {m!r}")
    return Schedule(ScheduleKind.FINITE, (float(delta), m), delta / 2.0)


def schedule_log_squared(delta: float) -> Schedule:
    """f = g⁻¹ with g(ε) = 2δ(1/(ε(ln ε)²) − e²/4) on (0, e^{-2}]; Σ f ≤ δ/2."""
    _check_delta(delta)
    return Schedule(ScheduleKind.LOG_SQUARED, (float(delta),), delta / 2.0)


def schedule_constant_band(a: float, b: float) -> Schedule:
    """Constant (b − a)/(b + a): maps the band (a, b) onto (1 − f, 1 + f) after scaling."""
    if a <= 0 or b <= a:
        raise DomainError(f"constant band needs 0 < a < b, got a={a!r}, b={b!r}")
    return Schedule(ScheduleKind.CONSTANT_BAND, ((b - a) / (b + a),), math.inf)


def schedule_inverse_log(a: float = 1.0, b: float = 2.0) -> Schedule:
    """Non-summable f = g⁻¹ with g(ε) = a/(ε ln(1/ε)) − b, capped at 1/e."""
    if a <= 0 or b < 0:
        raise DomainError(f"inverse-log schedule needs a > 0, b ≥ 0, got a={a!r}, b={b!r}")
    return Schedule(ScheduleKind.INVERSE_LOG, (float(a), float(b)), math.inf)


def custom_schedule(fn: Callable[[int], float], sum_bound: float = math.inf) -> Schedule:
    return Schedule(ScheduleKind.CUSTOM, (), float(sum_bound), fn)


def validate_schedule(schedule: Schedule, n: int) -> List[str]:
    """Problems found among f(0..n): range, monotonicity, partial sums."""
    table = schedule.table(n)
    problems: List[str] = []
    if np.any(table < 0.0) or np.any(table >= 1.0):
        problems.append(f"values outside [0, 1) within t ≤ {n}")
    rises = np.nonzero(np.diff(table) > 0.0)[0]
    if rises.size:
        problems.append(f"f increases at t={int(rises[0])}")
    if math.isfinite(schedule.sum_bound):
        partial = np.cumsum(table[1:])
        if partial.size and partial[-1] > schedule.sum_bound + SUM_SLACK:
            problems.append(f"Σ f(1..{n}) = {partial[-1]:.12g} exceeds sum_bound {schedule.sum_bound}")
    return problems
