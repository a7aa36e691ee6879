"""
The indefinitely oscillating martingale.

Starting from X_0 = 1, the process is pushed back and forth across the band
(1 − f(m), 1 + f(m)), where m is one plus the number of completed
upcrossings. At each prefix the next symbols are split into a light group
(total conditional probability p_u ≤ 1/2) and the rest, and the value moves
in one of three regimes:

  (i)   x ≥ 1:        rest → 1 − f(m); group → x + ((1 − p_u)/p_u)(x − (1 − f(m)))
  (ii)  1 > x ≥ γ:    rest → x − γ;     group → 1 + f(m), completing an upcrossing
  (iii) otherwise:    rest → x + d;     group → x − ((1 − p_u)/p_u)·d

with γ = (p_u/(1 − p_u))(1 + f(m) − x) and
d = min{(p_u/(1 − p_u))·x, ((1 − p_u)/p_u)·γ − 2f(m)}. If p_u = 0 the value is
frozen. Each branch keeps the conditional expectation equal to x.

``OscillatorBatch`` runs the same update on numpy arrays with identical
floating-point expressions, so a vectorized path and its scalar replay agree
bit for bit.
"""

from dataclasses import dataclass, replace
from enum import IntEnum
from functools import lru_cache
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import ContractError, DomainError
from ..martingale import BatchKernel, MartingaleProcess
from ..measure import ZERO_PROBABILITY, PrefixMeasure, verify_perpetual_entropy
from .schedules import Schedule, schedule_constant_band

logger = logging.getLogger(__name__)


# =============================================================================
# CONSTANTS
# =============================================================================

EDGE_SLACK = 1e-12              # band-edge tolerance when marking a low visit
GROUP_SLACK = 1e-12             # bin-packing tolerance against the 1/2 cap
ENTROPY_EPS = 0.01              # default perpetual-entropy margin checked before building
ENTROPY_DEPTH = 8               # default depth of that check


# =============================================================================
# SYMBOL GROUPS
# =============================================================================

@dataclass(frozen=True)
class SymbolGroup:
    """The light side a_u of a two-way split of the alphabet."""

    symbols: Tuple[int, ...]
    p_u: float

    def __contains__(self, symbol: int) -> bool:
        return symbol in self.symbols


@lru_cache(maxsize=4096)
def _choose_symbol_group(probs: Tuple[float, ...]) -> SymbolGroup:
    # heaviest first, ties by lowest index; keep adding while the group stays ≤ 1/2
    order = sorted(range(len(probs)), key=lambda a: (-probs[a], a))
    chosen = []
    total = 0.0
    for a in order:
        if total + probs[a] <= 0.5 + GROUP_SLACK:
            chosen.append(a)
            total += probs[a]
    return SymbolGroup(tuple(sorted(chosen)), min(total, 0.5))


def choose_symbol_group(cond_probs: Sequence[float]) -> SymbolGroup:
    """Split symbols into two non-empty groups; return the side with mass ≤ 1/2.

    Binary alphabets give the minority symbol (symbol 0 on a tie). Larger
    alphabets are packed greedily, heaviest symbol first, to bring the light
    side as close to 1/2 as possible.
    """
    probs = tuple(float(p) for p in cond_probs)
    if len(probs) < 2:
        raise DomainError(f"symbol grouping needs at least two symbols, got {len(probs)}")
    return _choose_symbol_group(probs)


# =============================================================================
# SCALAR STATE MACHINE
# =============================================================================

class StepCase(IntEnum):
    FROZEN = 0
    HIGH = 1        # x ≥ 1
    RETURN = 2      # 1 > x ≥ γ
    DRIFT = 3       # x < γ, x < 1


@dataclass(frozen=True)
class OscillatorState:
    """x = X_t, m = M_t, and whether ≤ 1 − f(m) was reached since the last upcrossing."""

    x: float = 1.0
    m: int = 1
    low_visited: bool = False
    frozen: bool = False


@dataclass(frozen=True)
class StepDetails:
    case: StepCase
    gamma: Optional[float] = None
    d: Optional[float] = None


def classify_step(s: OscillatorState, p_u: float, f: Schedule) -> StepDetails:
    """Which regime the next step falls into, with γ and d where defined."""
    if p_u <= ZERO_PROBABILITY:
        return StepDetails(StepCase.FROZEN)
    fm = f(s.m)
    x = s.x
    r = p_u / (1.0 - p_u)
    if x >= 1.0:
        return StepDetails(StepCase.HIGH)
    gamma = r * (1.0 + fm - x)
    if x >= gamma:
        return StepDetails(StepCase.RETURN, gamma)
    d = min(r * x, (1.0 - fm) - x)
    return StepDetails(StepCase.DRIFT, gamma, d)


def oscillator_step(s: OscillatorState, p_u: float, is_group_symbol: bool, f: Schedule) -> OscillatorState:
    """One step of the oscillator for the observed symbol's group membership."""
    details = classify_step(s, p_u, f)
    if details.case is StepCase.FROZEN:
        return replace(s, frozen=True)

    fm = f(s.m)
    x = s.x
    r = p_u / (1.0 - p_u)
    low_edge = 1.0 - fm
    m = s.m
    low = s.low_visited

    if details.case is StepCase.HIGH:
        x_new = x + (x - low_edge) / r if is_group_symbol else low_edge
    elif details.case is StepCase.RETURN:
        if is_group_symbol:
            x_new = 1.0 + fm
            if low:
                m += 1
                low = False
        else:
            x_new = x - details.gamma
    else:
        d = details.d
        if is_group_symbol:
            x_new = max(x - d / r, 0.0)
        else:
            x_new = x + d
            if abs(x_new - low_edge) <= EDGE_SLACK:
                x_new = low_edge

    if x_new <= (1.0 - f(m)) + EDGE_SLACK:
        low = True
    return OscillatorState(x_new, m, low, False)


# =============================================================================
# PROCESSES
# =============================================================================

class OscillatingProcess(MartingaleProcess):
    """Regroups the alphabet at every prefix from the reference conditionals."""

    name = "oscillator"

    def __init__(self, schedule: Schedule):
        self.schedule = schedule

    def initial_state(self) -> OscillatorState:
        return OscillatorState()

    def step(self, state: OscillatorState, probs, symbol: int):
        group = choose_symbol_group(probs)
        nxt = oscillator_step(state, group.p_u, symbol in group, self.schedule)
        return nxt, nxt.x

    def value(self, state: OscillatorState) -> float:
        return state.x

    def batch(self, n_paths: int, probs) -> "OscillatorBatch":
        return OscillatorBatch(n_paths, probs, self.schedule)


class DoobTightProcess(MartingaleProcess):
    """Y_t = c·X_t with c = (a + b)/2 and X_0 = X_1 = a/c on the constant band.

    Y never takes values strictly between a and b after t = 0, and every
    completed upcrossing ends exactly at b, which makes the expected-upcrossing
    inequality an equality.
    """

    name = "doob_tight"

    def __init__(self, a: float, b: float):
        self.a = float(a)
        self.b = float(b)
        self.c = (self.a + self.b) / 2.0
        self.schedule = schedule_constant_band(a, b)
        self.f = self.schedule(1)

    def initial_state(self) -> Tuple[bool, OscillatorState]:
        # the first step is held: X_1 = X_0 = a/c, already a low visit
        return False, OscillatorState(1.0 - self.f, 1, True, False)

    def step(self, state, probs, symbol: int):
        started, osc = state
        if started:
            group = choose_symbol_group(probs)
            osc = oscillator_step(osc, group.p_u, symbol in group, self.schedule)
        nxt = (True, osc)
        return nxt, self.value(nxt)

    def value(self, state) -> float:
        return self.scale(state[1].x)

    def scale(self, x: float) -> float:
        if x == 1.0 - self.f:
            return self.a
        if x == 1.0 + self.f:
            return self.b
        return self.c * x

    def batch(self, n_paths: int, probs) -> "DoobTightBatch":
        return DoobTightBatch(n_paths, probs, self)


def _check_entropy(p: PrefixMeasure, eps: float, depth: int) -> None:
    verdict = verify_perpetual_entropy(p, eps, depth)
    if not verdict.passed:
        raise ContractError(
            f"measure lacks perpetual entropy (eps={eps}) at prefix "
            f"{''.join(map(str, verdict.failing_prefix))!r}"
        )


def build_oscillator(
    p: PrefixMeasure,
    f: Schedule,
    entropy_eps: float = ENTROPY_EPS,
    entropy_depth: int = ENTROPY_DEPTH,
) -> OscillatingProcess:
    """Oscillating P-martingale for schedule ``f``.

    Raises:
        ContractError: P fails the perpetual-entropy check.
    """
    _check_entropy(p, entropy_eps, entropy_depth)
    logger.debug("Built oscillator with %s schedule %s", f.kind.value, f.params)
    return OscillatingProcess(f)


def doob_tight_process(
    a: float,
    b: float,
    p: PrefixMeasure,
    entropy_eps: float = ENTROPY_EPS,
    entropy_depth: int = ENTROPY_DEPTH,
) -> DoobTightProcess:
    """Process attaining Doob's and Dubins' upcrossing bounds on the band (a, b)."""
    if a <= 0 or b <= a:
        raise DomainError(f"tight process needs 0 < a < b, got a={a!r}, b={b!r}")
    _check_entropy(p, entropy_eps, entropy_depth)
    return DoobTightProcess(a, b)


# =============================================================================
# BATCH KERNELS
# =============================================================================

class OscillatorBatch(BatchKernel):
    """Vectorized oscillator for an i.i.d. measure (one fixed symbol group)."""

    def __init__(self, n_paths: int, probs: Sequence[float], schedule: Schedule,
                 x0: float = 1.0, low0: bool = False):
        group = choose_symbol_group(probs)
        self.p_u = group.p_u
        self.group_mask = np.zeros(len(probs), dtype=bool)
        self.group_mask[list(group.symbols)] = True
        self.schedule = schedule
        self._table = schedule.table(64)
        self.x = np.full(n_paths, x0, dtype=np.float64)
        self.m = np.ones(n_paths, dtype=np.int64)
        self.low = np.full(n_paths, low0, dtype=bool)

    def f_of(self, m: np.ndarray) -> np.ndarray:
        if m.size and int(m.max()) >= self._table.size:
            self._table = self.schedule.table(2 * int(m.max()) + 1)
        return self._table[m]

    @property
    def values(self) -> np.ndarray:
        return self.x

    def step(self, symbols: np.ndarray) -> None:
        p_u = self.p_u
        if p_u <= ZERO_PROBABILITY:
            return
        is_group = self.group_mask[symbols]
        x = self.x
        fm = self.f_of(self.m)
        r = p_u / (1.0 - p_u)
        low_edge = 1.0 - fm

        high = x >= 1.0
        gamma = r * (1.0 + fm - x)
        ret = ~high & (x >= gamma)
        d = np.minimum(r * x, low_edge - x)

        x_high = np.where(is_group, x + (x - low_edge) / r, low_edge)
        x_ret = np.where(is_group, 1.0 + fm, x - gamma)
        drift_up = x + d
        drift_up = np.where(np.abs(drift_up - low_edge) <= EDGE_SLACK, low_edge, drift_up)
        x_drift = np.where(is_group, np.maximum(x - d / r, 0.0), drift_up)
        x_new = np.where(high, x_high, np.where(ret, x_ret, x_drift))

        completed = ret & is_group & self.low
        self.m = self.m + completed
        low = self.low & ~completed
        self.low = low | (x_new <= (1.0 - self.f_of(self.m)) + EDGE_SLACK)
        self.x = x_new

    def keep(self, mask: np.ndarray) -> None:
        self.x = self.x[mask]
        self.m = self.m[mask]
        self.low = self.low[mask]

    def settled(self) -> np.ndarray:
        if self.p_u <= ZERO_PROBABILITY:
            return np.ones(self.x.shape, dtype=bool)
        fm = self.f_of(self.m)
        return (self.x == 0.0) | ((fm == 0.0) & (self.x == 1.0))


class DoobTightBatch(BatchKernel):
    """Oscillator on the constant band, first step held, values scaled by c."""

    def __init__(self, n_paths: int, probs: Sequence[float], process: DoobTightProcess):
        self.process = process
        self.inner = OscillatorBatch(n_paths, probs, process.schedule, x0=1.0 - process.f, low0=True)
        self.started = False

    @property
    def values(self) -> np.ndarray:
        x = self.inner.x
        f = self.process.f
        return np.where(
            x == 1.0 - f, self.process.a, np.where(x == 1.0 + f, self.process.b, self.process.c * x)
        )

    def step(self, symbols: np.ndarray) -> None:
        if not self.started:
            self.started = True
            return
        self.inner.step(symbols)

    def keep(self, mask: np.ndarray) -> None:
        self.inner.keep(mask)

    def settled(self) -> np.ndarray:
        if not self.started:
            return np.zeros(self.inner.x.shape, dtype=bool)
        return self.inner.settled()
