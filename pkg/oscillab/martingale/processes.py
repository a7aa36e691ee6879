"""
Martingale processes as stepwise state machines.

A process is a deterministic evaluator of a value at every finite prefix:
``initial_state()`` for the empty prefix and ``step(state, probs, symbol)``
one symbol deeper, where ``probs`` are the conditionals of the reference
measure at the current prefix. Replaying the same prefix always gives the
same value, which is how F_t-measurability is realized.

Processes that only need the i.i.d. conditionals of their measure also
provide a batch kernel: a numpy state machine that advances many paths per
call and is used by the Monte Carlo engine.
"""

from abc import ABC, abstractmethod
from typing import Any, Optional, Sequence, Tuple

import numpy as np

from ..errors import AbsoluteContinuityError, DomainError
from ..measure import PrefixMeasure, as_prefix


class _Undefined:
    """Value marker on P-null prefixes."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __reduce__(self):
        return (_Undefined, ())


UNDEFINED = _Undefined()


def is_defined(value: Any) -> bool:
    return value is not UNDEFINED


# =============================================================================
# BATCH KERNELS
# =============================================================================

class BatchKernel(ABC):
    """Vectorized state of many independent paths of one process."""

    @property
    @abstractmethod
    def values(self) -> np.ndarray:
        """Current value of every live path."""

    @abstractmethod
    def step(self, symbols: np.ndarray) -> None:
        """Advance every live path by its next symbol."""

    @abstractmethod
    def keep(self, mask: np.ndarray) -> None:
        """Drop every path where ``mask`` is False."""

    def settled(self) -> np.ndarray:
        """Paths sitting at a fixed point of every symbol; no value change is possible."""
        return np.zeros(self.values.shape, dtype=bool)


class ConstantBatch(BatchKernel):
    def __init__(self, n_paths: int, value: float):
        self._values = np.full(n_paths, value, dtype=np.float64)

    @property
    def values(self) -> np.ndarray:
        return self._values

    def step(self, symbols: np.ndarray) -> None:
        pass

    def keep(self, mask: np.ndarray) -> None:
        self._values = self._values[mask]

    def settled(self) -> np.ndarray:
        return np.ones(self._values.shape, dtype=bool)


class MultiplicativeBatch(BatchKernel):
    """X_{t+1} = X_t · factor[symbol]; factor 0 is absorbing."""

    def __init__(self, n_paths: int, initial: float, factors: Sequence[float]):
        self._values = np.full(n_paths, initial, dtype=np.float64)
        self._factors = np.asarray(factors, dtype=np.float64)

    @property
    def values(self) -> np.ndarray:
        return self._values

    def step(self, symbols: np.ndarray) -> None:
        self._values = self._values * self._factors[symbols]

    def keep(self, mask: np.ndarray) -> None:
        self._values = self._values[mask]

    def settled(self) -> np.ndarray:
        return self._values == 0.0


class SplitBatch(BatchKernel):
    """X ± min{X, 1 − X}/2 on symbol 1 / 0."""

    def __init__(self, n_paths: int, initial: float):
        self._values = np.full(n_paths, initial, dtype=np.float64)

    @property
    def values(self) -> np.ndarray:
        return self._values

    def step(self, symbols: np.ndarray) -> None:
        x = self._values
        half = np.minimum(x, 1.0 - x) / 2.0
        self._values = np.where(symbols == 1, x + half, x - half)

    def keep(self, mask: np.ndarray) -> None:
        self._values = self._values[mask]

    def settled(self) -> np.ndarray:
        return (self._values == 0.0) | (self._values == 1.0)


# =============================================================================
# PROCESS BASE
# =============================================================================

class MartingaleProcess(ABC):
    """Deterministic prefix-indexed process X_t."""

    name = "process"

    @abstractmethod
    def initial_state(self) -> Any:
        """State at the empty prefix."""

    @abstractmethod
    def step(self, state: Any, probs: Tuple[float, ...], symbol: int) -> Tuple[Any, Any]:
        """Advance by ``symbol``; returns (state, value). Value may be UNDEFINED."""

    @abstractmethod
    def value(self, state: Any) -> Any:
        """Value of ``state``; UNDEFINED on P-null prefixes."""

    @property
    def initial_value(self) -> float:
        return self.value(self.initial_state())

    def state_at(self, measure: PrefixMeasure, u) -> Any:
        prefix = as_prefix(u, measure.alphabet)
        state = self.initial_state()
        ctx = measure.root()
        for depth, a in enumerate(prefix):
            try:
                state, _ = self.step(state, measure.next_probs(ctx), a)
            except AbsoluteContinuityError as exc:
                raise AbsoluteContinuityError(exc.q_mass, prefix[: depth + 1]) from None
            ctx = measure.advance(ctx, a)
        return state

    def value_at(self, measure: PrefixMeasure, u) -> Any:
        """X(u), replaying the prefix under ``measure``."""
        return self.value(self.state_at(measure, u))

    def path_values(self, measure: PrefixMeasure, u) -> list:
        """[X(u_{1:0}), X(u_{1:1}), …, X(u)]."""
        prefix = as_prefix(u, measure.alphabet)
        state = self.initial_state()
        ctx = measure.root()
        values = [self.value(state)]
        for a in prefix:
            state, value = self.step(state, measure.next_probs(ctx), a)
            ctx = measure.advance(ctx, a)
            values.append(value)
        return values

    def batch(self, n_paths: int, probs: Tuple[float, ...]) -> Optional[BatchKernel]:
        """Vectorized kernel for an i.i.d. measure with conditionals ``probs``, if available."""
        return None


# =============================================================================
# ELEMENTARY PROCESSES
# =============================================================================

class ConstantProcess(MartingaleProcess):
    name = "constant"

    def __init__(self, constant: float = 1.0):
        if constant < 0:
            raise DomainError(f"constant process needs a nonnegative value, got {constant}")
        self.constant = float(constant)

    def initial_state(self) -> float:
        return self.constant

    def step(self, state, probs, symbol):
        return state, state

    def value(self, state):
        return state

    def batch(self, n_paths, probs):
        return ConstantBatch(n_paths, self.constant)


class MultiplicativeProcess(MartingaleProcess):
    """X_0 = initial, X(ua) = X(u) · factors[a].

    A martingale under an i.i.d. measure iff Σ_a p_a · factors[a] = 1.
    """

    name = "multiplicative"

    def __init__(self, factors: Sequence[float], initial: float = 1.0):
        if any(f < 0 for f in factors) or initial < 0:
            raise DomainError(f"multiplicative process needs nonnegative factors, got {factors}")
        self.factors = tuple(float(f) for f in factors)
        self.initial = float(initial)

    def initial_state(self) -> float:
        return self.initial

    def step(self, state, probs, symbol):
        value = state * self.factors[symbol]
        return value, value

    def value(self, state):
        return state

    def batch(self, n_paths, probs):
        return MultiplicativeBatch(n_paths, self.initial, self.factors)


class BoundedSplitProcess(MartingaleProcess):
    """[0,1]-valued walk X ± min{X, 1 − X}/2, up on symbol 1.

    A martingale under the fair coin.
    """

    name = "bounded_split"

    def __init__(self, initial: float = 0.5):
        if not 0.0 <= initial <= 1.0:
            raise DomainError(f"bounded split walk starts in [0, 1], got {initial}")
        self.initial = float(initial)

    def initial_state(self) -> float:
        return self.initial

    def step(self, state, probs, symbol):
        half = min(state, 1.0 - state) / 2.0
        value = state + half if symbol == 1 else state - half
        return value, value

    def value(self, state):
        return state

    def batch(self, n_paths, probs):
        return SplitBatch(n_paths, self.initial)


class ScaledProcess(MartingaleProcess):
    """c · X for a base process X."""

    def __init__(self, base: MartingaleProcess, scale: float):
        if scale < 0:
            raise DomainError(f"scale must be nonnegative, got {scale}")
        self.base = base
        self.scale = float(scale)
        self.name = f"scaled_{base.name}"

    def initial_state(self):
        return self.base.initial_state()

    def step(self, state, probs, symbol):
        state, _ = self.base.step(state, probs, symbol)
        return state, self.value(state)

    def value(self, state):
        value = self.base.value(state)
        return value if value is UNDEFINED else self.scale * value


def constant_process(value: float = 1.0) -> ConstantProcess:
    return ConstantProcess(value)


def multiplicative_process(factors: Sequence[float], initial: float = 1.0) -> MultiplicativeProcess:
    return MultiplicativeProcess(factors, initial)


def doubling_process() -> MultiplicativeProcess:
    """×2 on symbol 0, ×½ on symbol 1: a martingale under Bernoulli(2/3)."""
    return MultiplicativeProcess((2.0, 0.5))


def bounded_split_process(initial: float = 0.5) -> BoundedSplitProcess:
    return BoundedSplitProcess(initial)
