"""
Pairing theoretical bounds with empirical estimates.

Verdicts use a 3σ normal-approximation band: an upper bound holds iff
empirical ≤ theoretical + 3·std_err, a lower bound iff
empirical ≥ theoretical − 3·std_err. Exact estimates have std_err 0.
"""

from dataclasses import dataclass
from enum import Enum
import logging
import math
from typing import Any, Dict, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

SIGMA_BAND = 3.0
EXACT_SLACK = 1e-9      # rounding allowance when std_err is 0


class Direction(Enum):
    UPPER = "upper"
    LOWER = "lower"


class BoundVerdict(Enum):
    """Outcome of comparing an estimate with a bound"""
    HOLDS = "holds"
    VIOLATED = "violated"
    TIGHT = "tight"


@dataclass(frozen=True)
class Estimate:
    """Sample mean with its standard error."""

    mean: float
    std_err: float
    n: int

    @classmethod
    def exact(cls, value: float) -> "Estimate":
        return cls(value, 0.0, 0)

    @classmethod
    def from_counts(cls, successes: int, n: int) -> "Estimate":
        """Bernoulli proportion."""
        if n <= 0:
            return cls(math.nan, math.nan, 0)
        p = successes / n
        return cls(p, math.sqrt(p * (1.0 - p) / n), n)

    @classmethod
    def from_moments(cls, total: float, total_sq: float, n: int) -> "Estimate":
        """Mean and standard error from Σx and Σx² over n samples."""
        if n <= 0:
            return cls(math.nan, math.nan, 0)
        mean = total / n
        if n == 1:
            return cls(mean, 0.0, 1)
        var = max(0.0, (total_sq - n * mean * mean) / (n - 1))
        return cls(mean, math.sqrt(var / n), n)

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "Estimate":
        values = [float(x) for x in samples]
        return cls.from_moments(math.fsum(values), math.fsum(x * x for x in values), len(values))


@dataclass
class BoundReport:
    """A theoretical bound, the matching empirical estimate and the verdict."""

    name: str
    theoretical: float
    empirical: float
    std_err: float
    n: int
    direction: Direction
    verdict: BoundVerdict
    tolerance: Optional[float] = None
    band: Optional[Tuple[float, float]] = None
    k: Optional[int] = None

    @property
    def violated(self) -> bool:
        return self.verdict is BoundVerdict.VIOLATED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "direction": self.direction.value,
            "theoretical": self.theoretical,
            "empirical": self.empirical,
            "std_err": self.std_err,
            "n": self.n,
            "verdict": self.verdict.value,
            "tolerance": self.tolerance,
            "band_lo": None if self.band is None else self.band[0],
            "band_hi": None if self.band is None else self.band[1],
            "k": self.k,
        }


def assess(
    name: str,
    theoretical: float,
    estimate: Estimate,
    direction: Direction = Direction.UPPER,
    tolerance: Optional[float] = None,
    band: Optional[Tuple[float, float]] = None,
    k: Optional[int] = None,
) -> BoundReport:
    """Judge ``estimate`` against ``theoretical``.

    For bounds whose value is itself estimated from the same sample, pass the
    standard error of the per-path difference as ``estimate.std_err``.
    """
    margin = SIGMA_BAND * estimate.std_err + EXACT_SLACK
    if direction is Direction.UPPER:
        holds = estimate.mean <= theoretical + margin
    else:
        holds = estimate.mean >= theoretical - margin
    if not holds:
        verdict = BoundVerdict.VIOLATED
        logger.warning(
            "Bound %s violated: empirical %.6g vs %s bound %.6g (se %.3g)",
            name, estimate.mean, direction.value, theoretical, estimate.std_err,
        )
    elif tolerance is not None and abs(estimate.mean - theoretical) <= tolerance:
        verdict = BoundVerdict.TIGHT
    else:
        verdict = BoundVerdict.HOLDS
    return BoundReport(
        name=name,
        theoretical=theoretical,
        empirical=estimate.mean,
        std_err=estimate.std_err,
        n=estimate.n,
        direction=direction,
        verdict=verdict,
        tolerance=tolerance,
        band=band,
        k=k,
    )
