"""
Vectorized crossing trackers for the Monte Carlo engine.

Each tracker holds the scan state of many paths as numpy arrays and is fed
one column of values per time step. The update rules are the ones in
``counters`` applied elementwise, so a tracker and the scalar scan agree on
every path.
"""

import numpy as np

from ..errors import DomainError
from .counters import ALTERNATION_SLACK


class UpcrossingTracker:
    """Upcrossings of (c − ε, c + ε) for a batch of paths."""

    def __init__(self, n_paths: int, c: float, eps: float):
        if not eps > 0:
            raise DomainError(f"band half-width eps must be positive, got {eps!r}")
        self.c = c
        self.eps = eps
        self.lo = c - eps
        self.hi = c + eps
        self.count = np.zeros(n_paths, dtype=np.int64)
        self.waiting = np.zeros(n_paths, dtype=bool)
        self._started = False

    def push(self, x: np.ndarray) -> None:
        if not self._started:
            self._started = True
            return
        hit_low = ~self.waiting & (x <= self.lo)
        hit_high = self.waiting & (x >= self.hi)
        self.count += hit_high
        self.waiting = (self.waiting | hit_low) & ~hit_high

    def in_progress(self, x: np.ndarray) -> np.ndarray:
        return self.waiting & (x > 0.0)

    def keep(self, mask: np.ndarray) -> None:
        self.count = self.count[mask]
        self.waiting = self.waiting[mask]


class AlternationTracker:
    """Both anchored α-alternation chains for a batch of paths."""

    def __init__(self, n_paths: int, alpha: float):
        if not alpha > 0:
            raise DomainError(f"alternation size alpha must be positive, got {alpha!r}")
        self.alpha = alpha
        self.anchor = np.zeros((2, n_paths))
        self.need = np.empty((2, n_paths), dtype=np.int8)
        self.need[0] = -1
        self.need[1] = 1
        self.counts = np.zeros((2, n_paths), dtype=np.int64)
        self._started = False

    def push(self, x: np.ndarray) -> None:
        if not self._started:
            self._started = True
            self.anchor[:] = x
            return
        down_hit = x <= self.anchor - self.alpha + ALTERNATION_SLACK
        up_hit = x >= self.anchor + self.alpha - ALTERNATION_SLACK
        hit = np.where(self.need < 0, down_hit, up_hit)
        self.anchor = np.where(hit, x, self.anchor)
        self.need = np.where(hit, -self.need, self.need).astype(np.int8)
        self.counts += hit

    @property
    def count(self) -> np.ndarray:
        return self.counts.max(axis=0)

    def keep(self, mask: np.ndarray) -> None:
        self.anchor = self.anchor[:, mask]
        self.need = self.need[:, mask]
        self.counts = self.counts[:, mask]
