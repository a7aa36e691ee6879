"""
Closed-form upcrossing, oscillation and alternation bounds.

Upper bounds:
    dubins_bound                 P[U ≥ k] for nonnegative supermartingales
    doob_bound_xu                E[U_t] from the shortfall below the band
    doob_bound_classic           E[U_t] from the excess over the lower edge
    doob_bound_durrett           same, minus the excess at time 0
    doob_bound_downcrossing      downcrossing-derived variant (+1)
    davis_bound / alternation_probability_bound / alternation_expectation_bound
                                 α-alternations of [0,1]-valued martingales

Lower bounds (achieved by the oscillating construction):
    oscillation_event_lower_bound     P(E_{m,m})
    expected_upcrossings_lower_bound  E[U(1 − f(m), 1 + f(m))]
    log_squared_upcrossing_bound      P[U(1 − ε, 1 + ε) ≥ …] rate
    log_squared_expectation_bound     E[U(1 − ε, 1 + ε)] rate

Bounds that take an expectation over X_0 are specialized to a deterministic
starting value, which every process in this package has.
"""

from dataclasses import dataclass
from typing import Dict
import math

from ..errors import DomainError

LOG_SQUARED_VALIDITY = 0.015    # the log-squared rate holds for ε below this


def _check_probability_band(c: float, eps: float) -> None:
    if not (eps > 0 and c > eps):
        raise DomainError(f"need c > eps > 0, got c={c!r}, eps={eps!r}")


def _check_band(a: float, b: float) -> None:
    if not b > a:
        raise DomainError(f"need b > a, got a={a!r}, b={b!r}")


def _check_k(k: int) -> None:
    if k < 0:
        raise DomainError(f"crossing count k must be non-negative, got {k}")


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alternation size alpha must lie in (0, 1), got {alpha!r}")


# =============================================================================
# UPPER BOUNDS ON UPCROSSINGS
# =============================================================================

def dubins_bound(c: float, eps: float, k: int, x0: float) -> float:
    """((c − ε)/(c + ε))^k · min{x0/(c − ε), 1}."""
    _check_probability_band(c, eps)
    _check_k(k)
    if x0 < 0:
        raise DomainError(f"starting value must be nonnegative, got {x0!r}")
    return ((c - eps) / (c + eps)) ** k * min(x0 / (c - eps), 1.0)


def doob_bound_xu(c: float, eps: float, mean_shortfall: float) -> float:
    """E[max{c − ε − X_t, 0}]/(2ε)."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    if mean_shortfall < 0:
        raise DomainError(f"mean shortfall must be nonnegative, got {mean_shortfall!r}")
    return mean_shortfall / (2.0 * eps)


def doob_xu_cap(c: float, eps: float) -> float:
    """Largest value of ``doob_bound_xu`` for a nonnegative process: (c − ε)/(2ε)."""
    _check_probability_band(c, eps)
    return (c - eps) / (2.0 * eps)


def doob_bound_classic(a: float, b: float, mean_excess_at_t: float) -> float:
    """E[max{X_t − a, 0}]/(b − a)."""
    _check_band(a, b)
    return mean_excess_at_t / (b - a)


def doob_bound_durrett(a: float, b: float, mean_excess_at_t: float, mean_excess_at_0: float) -> float:
    """(E[max{X_t − a, 0}] − E[max{X_0 − a, 0}])/(b − a)."""
    _check_band(a, b)
    return (mean_excess_at_t - mean_excess_at_0) / (b - a)


def doob_bound_downcrossing(a: float, b: float, mean_shortfall_t: float, mean_shortfall_0: float) -> float:
    """(E[max{a − X_t, 0}] − E[max{a − X_0, 0}])/(b − a) + 1."""
    _check_band(a, b)
    return (mean_shortfall_t - mean_shortfall_0) / (b - a) + 1.0


# =============================================================================
# TIGHT VALUES
# =============================================================================

def dubins_tight_probability(a: float, b: float, k: int) -> float:
    """(a/b)^k, attained by the doob-tight process on (a, b)."""
    if not 0 < a < b:
        raise DomainError(f"need 0 < a < b, got a={a!r}, b={b!r}")
    _check_k(k)
    return (a / b) ** k


def doob_tight_expectation(a: float, b: float) -> float:
    """a/(b − a), the limit of E[U_t] for the doob-tight process."""
    if not 0 < a < b:
        raise DomainError(f"need 0 < a < b, got a={a!r}, b={b!r}")
    return a / (b - a)


def doob_weak_lower_bound(a: float, b: float) -> float:
    """(a + b)/(8(b − a)) − 1/2, a weaker attainable expectation."""
    if not 0 < a < b:
        raise DomainError(f"need 0 < a < b, got a={a!r}, b={b!r}")
    return (a + b) / (8.0 * (b - a)) - 0.5


# =============================================================================
# LOWER BOUNDS FROM THE OSCILLATING CONSTRUCTION
# =============================================================================

def oscillation_event_lower_bound(f, m: int) -> float:
    """P(E_{m,m}) ≥ 1 − Σ_{i=1}^{m} 2f(i), floored at 0."""
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    return max(0.0, 1.0 - math.fsum(2.0 * f(i) for i in range(1, m + 1)))


def expected_upcrossings_lower_bound(m: int, delta: float) -> float:
    """E[U(1 − f(m), 1 + f(m))] ≥ m(1 − δ)."""
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    if not 0.0 < delta <= 0.5:
        raise DomainError(f"delta must lie in (0, 1/2], got {delta!r}")
    return m * (1.0 - delta)


def _check_log_squared_eps(eps: float) -> None:
    if not 0.0 < eps < LOG_SQUARED_VALIDITY:
        raise DomainError(
            f"log-squared rate only holds for 0 < eps < {LOG_SQUARED_VALIDITY}, got {eps!r}"
        )


def log_squared_upcrossing_bound(delta: float, eps: float) -> float:
    """δ/(ε (ln 1/ε)²): upcrossings of (1 − ε, 1 + ε) attainable with probability ≥ 1 − δ."""
    _check_log_squared_eps(eps)
    return delta / (eps * math.log(1.0 / eps) ** 2)


def log_squared_expectation_bound(delta: float, eps: float) -> float:
    """δ(1 − δ)/(ε (ln 1/ε)²): attainable expected upcrossings of (1 − ε, 1 + ε)."""
    _check_log_squared_eps(eps)
    return delta * (1.0 - delta) / (eps * math.log(1.0 / eps) ** 2)


# =============================================================================
# ALTERNATIONS
# =============================================================================

def alternation_probability_bound(alpha: float, k: int) -> float:
    """P[A(α) ≥ 2k] ≤ ((1 − α)/(1 + α))^k for [0,1]-valued martingales."""
    _check_alpha(alpha)
    _check_k(k)
    return ((1.0 - alpha) / (1.0 + alpha)) ** k


def davis_bound(alpha: float, k: int) -> float:
    """((1 − α)/(1 + α))^{2k}, the square of ``alternation_probability_bound``."""
    return alternation_probability_bound(alpha, k) ** 2


def alternation_expectation_bound(alpha: float) -> float:
    """E[A(α)] ≤ 1/α."""
    _check_alpha(alpha)
    return 1.0 / alpha


# =============================================================================
# WORKED COMPARISONS
# =============================================================================

@dataclass(frozen=True)
class GapExample:
    """Attainable lower bound against the Dubins upper bound for one event."""

    lower: float
    upper: float
    gap: float
    limit: float

    def to_dict(self) -> Dict[str, float]:
        return {"lower": self.lower, "upper": self.upper, "gap": self.gap, "limit": self.limit}


def summable_gap_example(delta: float = 0.2, k: int = 3) -> GapExample:
    """P(E_{k,k}) for the finite schedule: lower 1 − δ, upper ((1 − δ/(2k))/(1 + δ/(2k)))^k.

    The upper bound tends to e^{−δ} as k grows.
    """
    if not 0.0 < delta < 0.5:
        raise DomainError(f"delta must lie in (0, 1/2), got {delta!r}")
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    eps = delta / (2.0 * k)
    lower = 1.0 - delta
    upper = dubins_bound(1.0, eps, k, 1.0)
    return GapExample(lower, upper, upper - lower, math.exp(-delta))


@dataclass(frozen=True)
class ExpectationGap:
    """Attainable expected upcrossings against Doob's cap on the same band."""

    lower: float
    upper: float

    @property
    def ratio(self) -> float:
        return self.upper / self.lower


def doob_expectation_gap(m: int, delta: float = 0.5) -> ExpectationGap:
    """m(1 − δ) against (1 − ε)/(2ε) with ε = δ/(2m); δ = 1/2 gives m/2 against < 2m."""
    eps = delta / (2.0 * m)
    return ExpectationGap(expected_upcrossings_lower_bound(m, delta), doob_xu_cap(1.0, eps))
