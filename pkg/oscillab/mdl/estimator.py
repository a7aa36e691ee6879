"""
Two-part MDL model selection and the non-convergence experiment.

The MDL choice at u is the model minimizing the code length
−log₂ Q(Γ_u) + K(Q). Code lengths are kept as running sums of −log₂ of the
conditionals, so long prefixes never underflow.

For the class {(P, K_P), (Q, K_Q)} with Q induced by a P-martingale X, the Q
code length is the P code length minus log₂ X_t. The experiment uses that to
decide selections straight from the simulated X path; a single trial can be
replayed through ``mdl_trace`` on the same symbols.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import logging
import math
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ContractError, DomainError, NoModelError
from ..martingale import induced_measure
from ..measure import (
    ZERO_PROBABILITY,
    PrefixMeasure,
    SymbolStreams,
    as_prefix,
    sample_path,
)
from ..oscillator import OscillatingProcess, build_oscillator, custom_schedule, schedule_finite

logger = logging.getLogger(__name__)

KRAFT_SLACK = 1e-12
SCORE_TOLERANCE = 1e-9      # code lengths closer than this (bits) are ties
EXPERIMENT_SLACK = 0.02     # allowance below 1 − δ for truncation and sampling
DEFAULT_BATCH = 4096


# =============================================================================
# MODEL CLASS
# =============================================================================

@dataclass(frozen=True)
class Model:
    measure: PrefixMeasure
    complexity: float


class ModelClass:
    """Ordered finite model class satisfying Σ 2^{−K} ≤ 1."""

    def __init__(self, models: Sequence[Tuple[PrefixMeasure, float]]):
        if not models:
            raise DomainError("model class must contain at least one model")
        self.models = [Model(m, float(k)) for m, k in models]
        for model in self.models:
            if model.complexity < 0:
                raise DomainError(f"complexity must be non-negative, got {model.complexity}")
        alphabets = {model.measure.alphabet for model in self.models}
        if len(alphabets) != 1:
            raise DomainError("all models must share one alphabet")
        self.alphabet = alphabets.pop()
        kraft = math.fsum(2.0 ** -model.complexity for model in self.models)
        if kraft > 1.0 + KRAFT_SLACK:
            raise ContractError(f"complexities violate Kraft's inequality: Σ 2^-K = {kraft:.6g} > 1")

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self):
        return iter(self.models)

    @property
    def complexities(self) -> List[float]:
        return [model.complexity for model in self.models]

    def code_lengths(self, u) -> List[float]:
        """−log₂ Q(Γ_u) + K(Q) for every model; +inf on null cylinders."""
        return [
            model.complexity - model.measure.log2_cylinder_prob(u)
            for model in self.models
        ]


def _argmin(scores: Sequence[float]) -> int:
    best = min(scores)
    if math.isinf(best):
        raise NoModelError("every model assigns probability 0 to the prefix")
    for index, score in enumerate(scores):
        if score <= best + SCORE_TOLERANCE:
            return index
    return 0  # unreachable


def mdl_select(model_class: ModelClass, u) -> int:
    """Index of the model with the shortest two-part code for u; lowest index on ties.

    Raises:
        NoModelError: Every model gives u probability 0.
    """
    return _argmin(model_class.code_lengths(u))


# =============================================================================
# TRACES
# =============================================================================

@dataclass
class MdlTrace:
    """MDL selections for prefix lengths 0..horizon."""

    selections: List[int]
    flips: int

    @classmethod
    def from_selections(cls, selections: Sequence[int]) -> "MdlTrace":
        selections = [int(s) for s in selections]
        flips = sum(1 for a, b in zip(selections, selections[1:]) if a != b)
        return cls(selections, flips)


def mdl_trace(model_class: ModelClass, path, horizon: Optional[int] = None) -> MdlTrace:
    """Selections along ``path`` for every prefix length t = 0..horizon."""
    path = as_prefix(path, model_class.alphabet)
    if horizon is None:
        horizon = len(path)
    if not 0 <= horizon <= len(path):
        raise DomainError(f"horizon {horizon} must lie in [0, {len(path)}]")

    contexts = [model.measure.root() for model in model_class]
    bits = list(model_class.complexities)
    selections = [_argmin(bits)]
    for a in path[:horizon]:
        for i, model in enumerate(model_class):
            if math.isinf(bits[i]):
                continue
            p = model.measure.next_probs(contexts[i])[a]
            if p <= ZERO_PROBABILITY:
                bits[i] = math.inf
                continue
            bits[i] -= math.log2(p)
            contexts[i] = model.measure.advance(contexts[i], a)
        selections.append(_argmin(bits))
    return MdlTrace.from_selections(selections)


# =============================================================================
# NON-CONVERGENCE EXPERIMENT
# =============================================================================

@dataclass
class MdlExperimentResult:
    """Per-trial flip counts of the two-model class {P, Q}."""

    flips: np.ndarray
    delta: float
    m: int
    horizon: int
    trials: int
    seed: int
    model_class: Optional[ModelClass] = field(default=None, repr=False)
    slack: float = EXPERIMENT_SLACK
    wall_time: float = 0.0

    @property
    def threshold(self) -> int:
        return 2 * self.m - 1

    @property
    def fraction(self) -> float:
        return float(np.mean(self.flips >= self.threshold)) if self.flips.size else math.nan

    @property
    def min_flips(self) -> int:
        return int(self.flips.min()) if self.flips.size else 0

    @property
    def passed(self) -> bool:
        return self.fraction >= 1.0 - self.delta - self.slack

    def to_summary(self) -> Dict[str, Any]:
        return {
            "fraction": self.fraction,
            "threshold": self.threshold,
            "slack": self.slack,
            "delta": self.delta,
            "m": self.m,
            "horizon": self.horizon,
            "trials": self.trials,
            "seed": self.seed,
            "min_flips": self.min_flips,
        }


def _no_oscillation(t: int) -> float:
    return 0.0


def _experiment_schedule(delta: float, m: int):
    if m == 0:
        # X stays at 1
        return custom_schedule(_no_oscillation, 0.0)
    return schedule_finite(delta, m)


def _flips_batch(args) -> np.ndarray:
    """Flip counts for trials [start, stop) of an i.i.d. P."""
    probs, process, seed, start, stop, horizon, log2_cut = args
    n = stop - start
    kernel = process.batch(n, probs)
    streams = SymbolStreams(seed, range(start, stop), probs)
    flips = np.zeros(n, dtype=np.int64)
    alive = np.arange(n)
    selected_q = np.full(n, 0.0 > log2_cut + SCORE_TOLERANCE)
    for _ in range(horizon):
        kernel.step(streams.next_column())
        x = kernel.values
        with np.errstate(divide="ignore"):
            now_q = np.log2(x) > log2_cut + SCORE_TOLERANCE
        flips[alive] += now_q != selected_q
        selected_q = now_q
        settled = kernel.settled()
        if settled.any():
            keep = ~settled
            kernel.keep(keep)
            streams.keep(keep)
            alive = alive[keep]
            selected_q = selected_q[keep]
            if not alive.size:
                break
    return flips


def mdl_oscillation_experiment(
    p: PrefixMeasure,
    delta: float,
    m: int,
    horizon: int,
    trials: int,
    seed: int,
    complexities: Tuple[float, float] = (1.0, 1.0),
    batch_size: int = DEFAULT_BATCH,
    workers: int = 1,
) -> MdlExperimentResult:
    """Fraction of P-sampled paths on which MDL over {P, Q} flips ≥ 2m − 1 times.

    Q is induced by the oscillator with the finite schedule (δ, m).

    Raises:
        DomainError: δ outside (0, 1/2), m < 0, horizon < 0 or trials < 1.
        ContractError: P fails the perpetual-entropy check.
    """
    if not 0.0 < delta < 0.5:
        raise DomainError(f"delta={delta!r} must lie in (0, 1/2)")
    if m < 0 or horizon < 0 or trials < 1:
        raise DomainError(f"need m ≥ 0, horizon ≥ 0, trials ≥ 1; got m={m}, horizon={horizon}, trials={trials}")

    started = time.perf_counter()
    process = build_oscillator(p, _experiment_schedule(delta, m))
    q = induced_measure(process, p)
    model_class = ModelClass([(p, complexities[0]), (q, complexities[1])])
    logger.info(
        "MDL experiment: delta=%s m=%d horizon=%d trials=%d seed=%d", delta, m, horizon, trials, seed
    )

    probs = p.iid_probs
    if probs is None:
        flips = np.array(
            [mdl_trace(model_class, sample_path(p, seed, i, horizon)).flips for i in range(trials)],
            dtype=np.int64,
        )
    else:
        flips = _vectorized_flips(process, probs, seed, trials, horizon, complexities, batch_size, workers)

    result = MdlExperimentResult(
        flips=flips, delta=delta, m=m, horizon=horizon, trials=trials, seed=seed,
        model_class=model_class, wall_time=time.perf_counter() - started,
    )
    logger.info(
        "MDL experiment done in %.2fs: fraction %.4f with ≥ %d flips",
        result.wall_time, result.fraction, result.threshold,
    )
    return result


def _vectorized_flips(
    process: OscillatingProcess,
    probs: Tuple[float, ...],
    seed: int,
    trials: int,
    horizon: int,
    complexities: Tuple[float, float],
    batch_size: int,
    workers: int,
) -> np.ndarray:
    # Q is selected iff log₂ X_t > K_Q − K_P
    log2_cut = complexities[1] - complexities[0]
    jobs = [
        (probs, process, seed, start, min(start + batch_size, trials), horizon, log2_cut)
        for start in range(0, trials, batch_size)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_flips_batch, jobs))
    else:
        parts = [_flips_batch(job) for job in jobs]
    return np.concatenate(parts)
