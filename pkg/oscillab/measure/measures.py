"""
Prefix measures on infinite strings over a finite alphabet.

A measure is represented only through its cylinder values, which are
generated by conditional next-symbol probabilities. Every measure is a small
state machine: ``root()`` gives the context of the empty prefix,
``next_probs(ctx)`` the conditionals at that prefix and ``advance(ctx, a)``
the context one symbol deeper. Long paths therefore cost O(1) per symbol,
while ``cond``/``cylinder_prob`` replay an explicit prefix.

Measures are immutable after construction and safe to share between workers.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Iterator, List, Optional, Sequence, Tuple, Union
import math

from ..errors import DomainError, EnumerationLimitError


# =============================================================================
# CONSTANTS
# =============================================================================

ZERO_PROBABILITY = 1e-15        # conditionals at or below this count as exactly 0
PROB_SUM_TOLERANCE = 1e-12      # |Σ_a cond(u,a) − 1| allowed at every prefix
ENUMERATION_LIMIT = 2 ** 24     # max |Σ|^depth for exhaustive tree walks

Prefix = Tuple[int, ...]
PrefixLike = Union[str, Sequence[int]]


# =============================================================================
# ALPHABET AND PREFIXES
# =============================================================================

@dataclass(frozen=True)
class Alphabet:
    """Finite alphabet; symbols are the indices 0..size-1."""

    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 2:
            raise DomainError(f"alphabet needs at least two symbols, got size={self.size!r}")

    @property
    def symbols(self) -> range:
        return range(self.size)

    def check(self, symbol: int) -> int:
        if not 0 <= symbol < self.size:
            raise DomainError(f"symbol {symbol!r} outside alphabet 0..{self.size - 1}")
        return symbol


BINARY = Alphabet(2)


def as_prefix(u: PrefixLike, alphabet: Alphabet) -> Prefix:
    """Normalize a prefix given as a digit string ("0110") or int sequence."""
    if isinstance(u, str):
        try:
            symbols = tuple(int(ch) for ch in u)
        except ValueError as exc:
            raise DomainError(f"prefix {u!r} is not a string of symbol digits") from exc
    else:
        symbols = tuple(int(a) for a in u)
    for a in symbols:
        alphabet.check(a)
    return symbols


def check_enumeration(alphabet: Alphabet, depth: int) -> None:
    """Raise if walking the full tree to ``depth`` would exceed the node budget."""
    if depth < 0:
        raise DomainError(f"depth must be non-negative, got {depth}")
    if depth * math.log2(alphabet.size) > math.log2(ENUMERATION_LIMIT):
        raise EnumerationLimitError(
            f"|Σ|^depth = {alphabet.size}^{depth} exceeds the enumeration limit 2^24"
        )


# =============================================================================
# BASE CLASS
# =============================================================================

class PrefixMeasure(ABC):
    """Probability measure on Σ^∞ given by conditional next-symbol probabilities."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet

    @abstractmethod
    def root(self) -> Any:
        """Context of the empty prefix."""

    @abstractmethod
    def next_probs(self, ctx: Any) -> Tuple[float, ...]:
        """Conditional probabilities of each next symbol at ``ctx``."""

    @abstractmethod
    def advance(self, ctx: Any, symbol: int) -> Any:
        """Context after appending ``symbol``."""

    @property
    def iid_probs(self) -> Optional[Tuple[float, ...]]:
        """Constant conditionals if the measure is i.i.d., else None."""
        return None

    def context(self, u: PrefixLike) -> Any:
        ctx = self.root()
        for a in as_prefix(u, self.alphabet):
            ctx = self.advance(ctx, a)
        return ctx

    def cond(self, u: PrefixLike, symbol: int) -> float:
        """P(Γ_{ua} | Γ_u)."""
        self.alphabet.check(symbol)
        return self.next_probs(self.context(u))[symbol]

    def cylinder_prob(self, u: PrefixLike) -> float:
        """P(Γ_u) as the product of conditionals along u."""
        prob = 1.0
        ctx = self.root()
        for a in as_prefix(u, self.alphabet):
            prob *= self.next_probs(ctx)[a]
            if prob == 0.0:
                return 0.0
            ctx = self.advance(ctx, a)
        return prob

    def log2_cylinder_prob(self, u: PrefixLike) -> float:
        """log₂ P(Γ_u) as a running sum; −inf on null cylinders."""
        total = 0.0
        ctx = self.root()
        for a in as_prefix(u, self.alphabet):
            p = self.next_probs(ctx)[a]
            if p <= ZERO_PROBABILITY:
                return -math.inf
            total += math.log2(p)
            ctx = self.advance(ctx, a)
        return total

    def iter_prefixes(self, depth: int) -> Iterator[Tuple[Prefix, Any, float]]:
        """Depth-first walk over every prefix of length ≤ depth with P(Γ_u) > 0."""
        check_enumeration(self.alphabet, depth)
        stack: List[Tuple[Prefix, Any, float]] = [((), self.root(), 1.0)]
        while stack:
            prefix, ctx, prob = stack.pop()
            yield prefix, ctx, prob
            if len(prefix) == depth:
                continue
            probs = self.next_probs(ctx)
            for a in reversed(self.alphabet.symbols):
                if probs[a] > ZERO_PROBABILITY:
                    stack.append((prefix + (a,), self.advance(ctx, a), prob * probs[a]))


def _validated(probs: Sequence[float], where: str) -> Tuple[float, ...]:
    values = tuple(float(p) for p in probs)
    for p in values:
        if not 0.0 <= p <= 1.0 or math.isnan(p):
            raise DomainError(f"{where}: probability {p!r} outside [0, 1]")
    total = math.fsum(values)
    if abs(total - 1.0) > PROB_SUM_TOLERANCE:
        raise DomainError(f"{where}: conditionals sum to {total!r}, expected 1")
    return values


# =============================================================================
# CONCRETE MEASURES
# =============================================================================

class IIDMeasure(PrefixMeasure):
    """Every symbol drawn independently from the same distribution."""

    def __init__(self, probs: Sequence[float]):
        super().__init__(Alphabet(len(probs)))
        self.probs = _validated(probs, "i.i.d. measure")

    def root(self) -> None:
        return None

    def next_probs(self, ctx: Any) -> Tuple[float, ...]:
        return self.probs

    def advance(self, ctx: Any, symbol: int) -> None:
        return None

    @property
    def iid_probs(self) -> Tuple[float, ...]:
        return self.probs

    def __repr__(self) -> str:
        return f"IIDMeasure(probs={self.probs})"


class MixtureMeasure(PrefixMeasure):
    """Bayes mixture Σ w_i P_i; the context carries the posterior weights."""

    def __init__(self, components: Sequence[PrefixMeasure], weights: Sequence[float]):
        if len(components) < 1 or len(components) != len(weights):
            raise DomainError("mixture needs one weight per component and at least one component")
        alphabet = components[0].alphabet
        if any(c.alphabet != alphabet for c in components):
            raise DomainError("mixture components must share an alphabet")
        super().__init__(alphabet)
        self.components = tuple(components)
        self.weights = _validated(weights, "mixture weights")

    def root(self) -> Tuple[Tuple[Any, ...], Tuple[float, ...]]:
        return tuple(c.root() for c in self.components), self.weights

    def next_probs(self, ctx) -> Tuple[float, ...]:
        contexts, weights = ctx
        rows = [c.next_probs(x) for c, x in zip(self.components, contexts)]
        return tuple(
            math.fsum(w * row[a] for w, row in zip(weights, rows)) for a in self.alphabet.symbols
        )

    def advance(self, ctx, symbol: int):
        contexts, weights = ctx
        likelihoods = [c.next_probs(x)[symbol] for c, x in zip(self.components, contexts)]
        joint = [w * lk for w, lk in zip(weights, likelihoods)]
        total = math.fsum(joint)
        posterior = tuple(j / total for j in joint) if total > 0.0 else weights
        advanced = tuple(c.advance(x, symbol) for c, x in zip(self.components, contexts))
        return advanced, posterior

    def posterior(self, u: PrefixLike) -> Tuple[float, ...]:
        return self.context(u)[1]


class CallableMeasure(PrefixMeasure):
    """Arbitrary prefix-dependent measure; the context is the prefix itself."""

    def __init__(self, alphabet: Alphabet, cond_fn: Callable[[Prefix], Sequence[float]]):
        super().__init__(alphabet)
        self._cond_fn = cond_fn

    def root(self) -> Prefix:
        return ()

    def next_probs(self, ctx: Prefix) -> Tuple[float, ...]:
        probs = _validated(self._cond_fn(ctx), f"conditionals at prefix {ctx!r}")
        if len(probs) != self.alphabet.size:
            raise DomainError(f"expected {self.alphabet.size} conditionals at {ctx!r}, got {len(probs)}")
        return probs

    def advance(self, ctx: Prefix, symbol: int) -> Prefix:
        return ctx + (symbol,)


# =============================================================================
# CONSTRUCTORS
# =============================================================================

def bernoulli_measure(p: float) -> IIDMeasure:
    """Binary i.i.d. measure; ``p`` is the probability of symbol 1."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Bernoulli parameter p={p!r} outside [0, 1]")
    return IIDMeasure((1.0 - p, p))


def categorical_measure(probs: Sequence[float]) -> IIDMeasure:
    return IIDMeasure(probs)


def mixture_measure(components: Sequence[PrefixMeasure], weights: Sequence[float]) -> MixtureMeasure:
    return MixtureMeasure(components, weights)


def prefix_measure(alphabet: Alphabet, cond_fn: Callable[[Prefix], Sequence[float]]) -> CallableMeasure:
    return CallableMeasure(alphabet, cond_fn)


def cylinder_prob(m: PrefixMeasure, u: PrefixLike) -> float:
    """P(Γ_u); the empty prefix has probability 1."""
    return m.cylinder_prob(u)
