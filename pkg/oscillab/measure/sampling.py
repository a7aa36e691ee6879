"""
Seeded per-trial symbol streams.

Trial ``i`` of a run with master seed ``s`` draws doubles from
``Philox(SeedSequence(entropy=s, spawn_key=(i,)))`` and turns each double u
into the symbol a with F(a − 1) ≤ u < F(a), F the cumulative next-symbol
probabilities. A trial consumes its stream in order one double per step, so
it can be replayed alone and its symbols never depend on how trials are
grouped into batches or workers.
"""

from typing import Iterable, List, Sequence

import numpy as np

from ..errors import DomainError
from .measures import Prefix, PrefixMeasure

DEFAULT_CHUNK = 1024    # doubles drawn per trial per refill


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """Generator for one trial; the SeedSequence hash mixes (seed, trial)."""
    if seed < 0 or trial < 0:
        raise DomainError(f"seed and trial index must be non-negative, got seed={seed}, trial={trial}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(trial,))))


def cumulative_edges(probs: Sequence[float]) -> np.ndarray:
    """Inner cut points F(0), …, F(|Σ| − 2) for ``symbols_from_uniforms``."""
    return np.cumsum(np.asarray(probs, dtype=np.float64))[:-1]


def symbols_from_uniforms(uniforms: np.ndarray, edges: np.ndarray) -> np.ndarray:
    return np.searchsorted(edges, uniforms, side="right").astype(np.int64)


def sample_symbols(seed: int, trial: int, probs: Sequence[float], length: int) -> np.ndarray:
    """The first ``length`` symbols of one trial under an i.i.d. measure."""
    gen = trial_generator(seed, trial)
    return symbols_from_uniforms(gen.random(length), cumulative_edges(probs))


def sample_path(measure: PrefixMeasure, seed: int, trial: int, length: int) -> Prefix:
    """The first ``length`` symbols of one trial under any prefix measure."""
    gen = trial_generator(seed, trial)
    uniforms = gen.random(length)
    ctx = measure.root()
    path: List[int] = []
    for u in uniforms:
        a = int(symbols_from_uniforms(np.array([u]), cumulative_edges(measure.next_probs(ctx)))[0])
        path.append(a)
        ctx = measure.advance(ctx, a)
    return tuple(path)


class SymbolStreams:
    """Columns of i.i.d. symbols for a block of trials, one column per step.

    Doubles are drawn ``chunk`` at a time per trial, which yields the same
    sequence as drawing them one by one.
    """

    def __init__(self, seed: int, trials: Iterable[int], probs: Sequence[float], chunk: int = DEFAULT_CHUNK):
        self.generators = [trial_generator(seed, int(i)) for i in trials]
        self.edges = cumulative_edges(probs)
        self.chunk = chunk
        self._buffer = np.empty((len(self.generators), 0), dtype=np.int64)
        self._pos = 0

    def __len__(self) -> int:
        return len(self.generators)

    def _refill(self) -> None:
        if not self.generators:
            self._buffer = np.empty((0, self.chunk), dtype=np.int64)
        else:
            uniforms = np.stack([g.random(self.chunk) for g in self.generators])
            self._buffer = symbols_from_uniforms(uniforms, self.edges)
        self._pos = 0

    def next_column(self) -> np.ndarray:
        if self._pos >= self._buffer.shape[1]:
            self._refill()
        column = self._buffer[:, self._pos]
        self._pos += 1
        return column

    def keep(self, mask: np.ndarray) -> None:
        """Drop the trials where ``mask`` is False."""
        self.generators = [g for g, k in zip(self.generators, mask) if k]
        self._buffer = self._buffer[mask]
