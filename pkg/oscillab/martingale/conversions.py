"""
Measure ↔ martingale conversions.

- ``quotient_martingale(Q, P)``: X(u) = Q(Γ_u)/P(Γ_u), a nonnegative
  P-martingale with expectation 1 whenever Q is absolutely continuous with
  respect to P on cylinders.
- ``induced_measure(X, P)``: q(u) = X(u)·P(Γ_u), the measure a nonnegative
  P-martingale with X_0 = 1 induces.
- ``belief_process``: posterior of a hypothesis under the Bayes mixture, a
  [0,1]-valued martingale under that mixture.

Ratios are carried incrementally (X(ua) = X(u)·Q(a|u)/P(a|u)) so long paths
never underflow the cylinder products.
"""

from dataclasses import dataclass
import logging
import math
from typing import Any, Dict, Tuple

from ..errors import AbsoluteContinuityError, ContractError, DomainError
from ..measure import ZERO_PROBABILITY, MixtureMeasure, PrefixMeasure
from .processes import UNDEFINED, MartingaleProcess, MultiplicativeBatch, ScaledProcess
from .verification import CLOSED_FORM_TOLERANCE, DEFAULT_TOLERANCE, iter_tree, verify_martingale

logger = logging.getLogger(__name__)

INDUCED_CHECK_DEPTH = 8     # depth of the martingale check before inducing a measure


class QuotientProcess(MartingaleProcess):
    """X(u) = Q(Γ_u)/P(Γ_u). State: (Q context, ratio or UNDEFINED)."""

    name = "quotient"

    def __init__(self, q: PrefixMeasure, p: PrefixMeasure):
        if q.alphabet != p.alphabet:
            raise DomainError("quotient needs Q and P over the same alphabet")
        self.q = q
        self.p = p

    def initial_state(self) -> Tuple[Any, Any]:
        return self.q.root(), 1.0

    def step(self, state, probs, symbol):
        q_ctx, ratio = state
        next_ctx = self.q.advance(q_ctx, symbol)
        if ratio is UNDEFINED:
            return (next_ctx, UNDEFINED), UNDEFINED
        q_cond = self.q.next_probs(q_ctx)[symbol]
        p_cond = probs[symbol]
        if p_cond <= ZERO_PROBABILITY:
            if q_cond > ZERO_PROBABILITY and ratio > 0.0:
                raise AbsoluteContinuityError(q_cond * ratio)
            return (next_ctx, UNDEFINED), UNDEFINED
        value = ratio * q_cond / p_cond
        return (next_ctx, value), value

    def value(self, state):
        return state[1]

    def batch(self, n_paths, probs):
        q_probs = self.q.iid_probs
        if q_probs is None or self.p.iid_probs is None:
            return None
        factors = []
        for q_a, p_a in zip(q_probs, probs):
            if p_a <= ZERO_PROBABILITY:
                # never sampled under P
                factors.append(0.0)
            else:
                factors.append(q_a / p_a)
        return MultiplicativeBatch(n_paths, 1.0, factors)


def quotient_martingale(q: PrefixMeasure, p: PrefixMeasure) -> QuotientProcess:
    """Q/P as a P-martingale; absolute continuity is checked lazily per visited prefix."""
    return QuotientProcess(q, p)


class InducedMeasure(PrefixMeasure):
    """q(u) = X(u)·P(Γ_u). Context: (P context, process state, X(u))."""

    def __init__(self, process: MartingaleProcess, p: PrefixMeasure):
        super().__init__(p.alphabet)
        self.process = process
        self.p = p

    def root(self):
        state = self.process.initial_state()
        return self.p.root(), state, self.process.value(state)

    def next_probs(self, ctx) -> Tuple[float, ...]:
        p_ctx, state, value = ctx
        p_probs = self.p.next_probs(p_ctx)
        if value is UNDEFINED or value <= 0.0:
            # q(u) = 0; any distribution keeps q(ua) = 0
            return p_probs
        conds = []
        for a, p_a in enumerate(p_probs):
            if p_a <= ZERO_PROBABILITY:
                conds.append(0.0)
                continue
            _, child = self.process.step(state, p_probs, a)
            conds.append(p_a * child / value)
        return tuple(conds)

    def advance(self, ctx, symbol: int):
        p_ctx, state, _ = ctx
        p_probs = self.p.next_probs(p_ctx)
        state, value = self.process.step(state, p_probs, symbol)
        return self.p.advance(p_ctx, symbol), state, value


def induced_measure(
    process: MartingaleProcess,
    p: PrefixMeasure,
    depth: int = INDUCED_CHECK_DEPTH,
    tol: float = DEFAULT_TOLERANCE,
) -> InducedMeasure:
    """Measure induced by a nonnegative P-martingale with X_0 = 1.

    Raises:
        ContractError: X_0 ≠ 1 or the martingale check fails to ``depth``.
    """
    x0 = process.initial_value
    if abs(x0 - 1.0) > tol:
        raise ContractError(f"inducing a measure needs X_0 = 1, got {x0}")
    report = verify_martingale(process, p, depth, tol)
    if not report.passed:
        raise ContractError(
            f"process {process.name!r} is not a nonnegative P-martingale to depth {depth}: "
            f"defect={report.max_martingale_defect:.3e}, min={report.min_value:.3e}"
        )
    logger.debug("Inducing measure from %s (defect %.2e)", process.name, report.max_martingale_defect)
    return InducedMeasure(process, p)


def belief_process(
    hypothesis: PrefixMeasure,
    alternative: PrefixMeasure,
    prior: float = 0.5,
) -> Tuple[MartingaleProcess, MixtureMeasure]:
    """Posterior probability of ``hypothesis`` after each symbol.

    Returns the process and the mixture prior·H + (1 − prior)·A under which it
    is a [0,1]-valued martingale starting at ``prior``.
    """
    if not 0.0 < prior < 1.0:
        raise DomainError(f"prior must lie in (0, 1), got {prior}")
    mixture = MixtureMeasure((hypothesis, alternative), (prior, 1.0 - prior))
    process = ScaledProcess(QuotientProcess(hypothesis, mixture), prior)
    process.name = "belief"
    return process, mixture


@dataclass
class RoundTripReport:
    """Largest deviations of Q/P from X and of q from additivity, Q induced by X."""

    depth: int
    max_ratio_defect: float
    max_semimeasure_defect: float
    nodes: int

    def passed(self, tol: float = CLOSED_FORM_TOLERANCE) -> bool:
        return self.max_ratio_defect <= tol and self.max_semimeasure_defect <= tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "depth": self.depth,
            "max_ratio_defect": self.max_ratio_defect,
            "max_semimeasure_defect": self.max_semimeasure_defect,
            "nodes": self.nodes,
        }


def round_trip_defects(process: MartingaleProcess, p: PrefixMeasure, depth: int) -> RoundTripReport:
    """Compare quotient_martingale(induced_measure(X, P), P) with X on every prefix to ``depth``,
    and check Σ_a q(ua) = q(u) for the induced q."""
    q = InducedMeasure(process, p)
    quotient = QuotientProcess(q, p)
    ratio_defect = 0.0
    additivity_defect = 0.0
    nodes = 0
    for node in iter_tree(process, p, depth):
        nodes += 1
        ratio = quotient.value_at(p, node.prefix)
        ratio_defect = max(ratio_defect, abs(ratio - node.value))
        if len(node.prefix) < depth:
            q_u = q.cylinder_prob(node.prefix)
            children = math.fsum(q.cylinder_prob(node.prefix + (a,)) for a in p.alphabet.symbols)
            additivity_defect = max(additivity_defect, abs(children - q_u))
    return RoundTripReport(depth, ratio_defect, additivity_defect, nodes)
