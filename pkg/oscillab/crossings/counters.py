"""
Upcrossing and alternation counters over recorded value paths.

Upcrossings of (c − ε, c + ε) follow the stopping-time recursion
T_0 = 0, T_{2k+1} = first t > T_{2k} with X_t ≤ c − ε,
T_{2k+2} = first t > T_{2k+1} with X_t ≥ c + ε; U_t counts even stops ≤ t.

α-alternations run two anchored chains. The down-first chain waits for a drop
of at least α below its anchor, re-anchors at the value reached, then waits
for a rise of at least α, and so on. The up-first chain mirrors it. A is the
larger of the two chain counts.

The ``*Scan`` classes are immutable one-value-at-a-time versions used when
walking exact trees.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple
import math

from ..errors import DomainError

ALTERNATION_SLACK = 1e-12       # anchors ± α compared with this tolerance
TIGHTNESS_TOLERANCE = 1e-9      # stop values must equal a or b within this


# =============================================================================
# UPCROSSINGS
# =============================================================================

@dataclass
class CrossingTally:
    """Upcrossings of one band along one path."""

    count: int
    stop_times: List[int]
    c: float
    eps: float
    in_progress: bool = False

    @property
    def band_lo(self) -> float:
        return self.c - self.eps

    @property
    def band_hi(self) -> float:
        return self.c + self.eps

    def to_dict(self) -> Dict[str, Any]:
        return {
            "band_lo": self.band_lo,
            "band_hi": self.band_hi,
            "upcrossings": self.count,
            "stop_times": list(self.stop_times),
            "in_progress": self.in_progress,
        }


def _check_band(eps: float) -> None:
    if not eps > 0:
        raise DomainError(f"band half-width eps must be positive, got {eps!r}")


def count_upcrossings(values: Sequence[float], c: float, eps: float) -> CrossingTally:
    """Single left-to-right scan realizing the stopping-time recursion."""
    _check_band(eps)
    if len(values) == 0:
        raise DomainError("cannot count upcrossings of an empty path")
    lo, hi = c - eps, c + eps
    stops: List[int] = []
    waiting_high = False
    count = 0
    for t in range(1, len(values)):
        x = values[t]
        if not waiting_high:
            if x <= lo:
                stops.append(t)
                waiting_high = True
        elif x >= hi:
            stops.append(t)
            waiting_high = False
            count += 1
    in_progress = waiting_high and values[-1] > 0.0
    return CrossingTally(count, stops, c, eps, in_progress)


def count_downcrossings(values: Sequence[float], c: float, eps: float) -> CrossingTally:
    """Downcrossings of (c − ε, c + ε) as upcrossings of the negated path."""
    tally = count_upcrossings([-x for x in values], -c, eps)
    tally.in_progress = False
    return tally


@dataclass(frozen=True)
class UpcrossingScan:
    """Incremental upcrossing state; ``push`` returns the successor."""

    lo: float
    hi: float
    count: int = 0
    waiting_high: bool = False
    seen: int = 0
    last: float = math.nan

    @classmethod
    def for_band(cls, c: float, eps: float) -> "UpcrossingScan":
        _check_band(eps)
        return cls(c - eps, c + eps)

    def push(self, x: float) -> "UpcrossingScan":
        if self.seen == 0:
            return replace(self, seen=1, last=x)
        if not self.waiting_high:
            if x <= self.lo:
                return replace(self, waiting_high=True, seen=self.seen + 1, last=x)
        elif x >= self.hi:
            return replace(self, waiting_high=False, count=self.count + 1, seen=self.seen + 1, last=x)
        return replace(self, seen=self.seen + 1, last=x)

    @property
    def in_progress(self) -> bool:
        return self.waiting_high and self.last > 0.0


# =============================================================================
# UNIFORM EVENTS
# =============================================================================

def event_emm(values: Sequence[float], f, m: int) -> bool:
    """True iff count_upcrossings(values, 1, f(k)) ≥ k for every k ≤ m.

    A vanished band (f(k) = 0) admits no upcrossing, so the event fails there.

    Raises:
        DomainError: m < 0.
    """
    if m < 0:
        raise DomainError(f"event index m must be non-negative, got {m}")
    for k in range(1, m + 1):
        eps = f(k)
        if eps <= 0.0:
            return False
        if count_upcrossings(values, 1.0, eps).count < k:
            return False
    return True


# =============================================================================
# ALTERNATIONS
# =============================================================================

DOWN_FIRST = "down_first"
UP_FIRST = "up_first"


@dataclass
class AlternationTally:
    """α-alternations of one path; ``chain`` names the chain attaining the maximum."""

    count: int
    alpha: float
    chain: str
    down_first: int
    up_first: int
    stop_times: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alternations": self.count,
            "alpha": self.alpha,
            "chain": self.chain,
            "down_first": self.down_first,
            "up_first": self.up_first,
        }


def _run_chain(values: Sequence[float], alpha: float, direction: int) -> Tuple[int, List[int]]:
    anchor = values[0]
    need = direction
    stops: List[int] = []
    for t in range(1, len(values)):
        x = values[t]
        if need < 0:
            hit = x <= anchor - alpha + ALTERNATION_SLACK
        else:
            hit = x >= anchor + alpha - ALTERNATION_SLACK
        if hit:
            stops.append(t)
            anchor = x
            need = -need
    return len(stops), stops


def count_alternations(values: Sequence[float], alpha: float) -> AlternationTally:
    """A(α) as the larger of the down-first and up-first anchored chains."""
    if not alpha > 0:
        raise DomainError(f"alternation size alpha must be positive, got {alpha!r}")
    if len(values) == 0:
        return AlternationTally(0, alpha, DOWN_FIRST, 0, 0)
    down, down_stops = _run_chain(values, alpha, -1)
    up, up_stops = _run_chain(values, alpha, +1)
    if up > down:
        return AlternationTally(up, alpha, UP_FIRST, down, up, up_stops)
    return AlternationTally(down, alpha, DOWN_FIRST, down, up, down_stops)


@dataclass(frozen=True)
class AlternationScan:
    """Incremental two-chain alternation state."""

    alpha: float
    anchors: Tuple[float, float] = (math.nan, math.nan)
    needs: Tuple[int, int] = (-1, +1)
    counts: Tuple[int, int] = (0, 0)
    seen: int = 0

    def push(self, x: float) -> "AlternationScan":
        if self.seen == 0:
            return replace(self, anchors=(x, x), seen=1)
        anchors, needs, counts = list(self.anchors), list(self.needs), list(self.counts)
        for i in range(2):
            if needs[i] < 0:
                hit = x <= anchors[i] - self.alpha + ALTERNATION_SLACK
            else:
                hit = x >= anchors[i] + self.alpha - ALTERNATION_SLACK
            if hit:
                anchors[i] = x
                needs[i] = -needs[i]
                counts[i] += 1
        return replace(self, anchors=tuple(anchors), needs=tuple(needs), counts=tuple(counts),
                       seen=self.seen + 1)

    @property
    def count(self) -> int:
        return max(self.counts)


# =============================================================================
# TIGHTNESS CRITERION
# =============================================================================

@dataclass
class TightnessVerdict:
    """Whether every path avoids (a, b) after hitting a and crosses exactly at a and b."""

    passed: bool
    paths: int
    failures: List[Tuple[int, str]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "paths": self.paths,
            "failures": [{"path": i, "reason": r} for i, r in self.failures],
        }


def _tightness_failure(values: Sequence[float], a: float, b: float) -> Optional[str]:
    tol = TIGHTNESS_TOLERANCE
    first_hit = next((t for t, x in enumerate(values) if x <= a + tol), None)
    if first_hit is not None:
        for t in range(first_hit, len(values)):
            if a + tol < values[t] < b - tol:
                return f"value {values[t]!r} inside ({a}, {b}) at t={t}"
    tally = count_upcrossings(values, (a + b) / 2.0, (b - a) / 2.0)
    for i, t in enumerate(tally.stop_times):
        target = a if i % 2 == 0 else b
        if abs(values[t] - target) > tol:
            return f"stop T_{i + 1}={t} at value {values[t]!r}, expected {target}"
    return None


def check_tightness_criterion(value_paths, a: float, b: float) -> TightnessVerdict:
    """Check the two conditions that make Doob's upcrossing bound an equality."""
    if a <= 0 or b <= a:
        raise DomainError(f"tightness criterion needs 0 < a < b, got a={a!r}, b={b!r}")
    failures: List[Tuple[int, str]] = []
    count = 0
    for i, path in enumerate(value_paths):
        count += 1
        reason = _tightness_failure(path, a, b)
        if reason is not None:
            failures.append((i, reason))
    return TightnessVerdict(not failures, count, failures)
