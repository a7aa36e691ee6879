"""
Exact verification of the martingale property on finite trees.

The walk visits every prefix u with P(Γ_u) > 0 up to a depth and compares
X(u) with the one-step conditional expectation Σ_a P(a|u)·X(ua). The
multi-step condition follows by the tower rule.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterator, List, NamedTuple, Tuple

from ..measure import ZERO_PROBABILITY, Prefix, PrefixMeasure, check_enumeration
from .processes import UNDEFINED, MartingaleProcess

DEFAULT_TOLERANCE = 1e-9        # composite processes (oscillator, induced measures)
CLOSED_FORM_TOLERANCE = 1e-12   # closed-form processes (quotients, constant)


class Condition(Enum):
    """Which inequality the one-step check enforces"""
    MARTINGALE = "martingale"
    SUPERMARTINGALE = "supermartingale"
    SUBMARTINGALE = "submartingale"


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"


@dataclass
class VerificationReport:
    """Maxima collected over the exact tree."""

    depth: int
    max_martingale_defect: float
    max_expectation_defect: float
    min_value: float
    verdict: Verdict
    tolerance: float
    condition: Condition = Condition.MARTINGALE
    nodes: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "depth": self.depth,
            "max_defect": self.max_martingale_defect,
            "expectation_defect": self.max_expectation_defect,
            "min_value": self.min_value,
            "verdict": self.verdict.value,
        }


class TreeNode(NamedTuple):
    prefix: Prefix
    prob: float
    ctx: Any
    state: Any
    value: float


def iter_tree(process: MartingaleProcess, measure: PrefixMeasure, depth: int) -> Iterator[TreeNode]:
    """Depth-first walk over (prefix, P(Γ_u), measure ctx, process state, X(u)).

    Zero-probability branches are skipped, so values are never UNDEFINED.
    """
    check_enumeration(measure.alphabet, depth)
    state = process.initial_state()
    stack: List[TreeNode] = [TreeNode((), 1.0, measure.root(), state, process.value(state))]
    while stack:
        node = stack.pop()
        yield node
        if len(node.prefix) == depth:
            continue
        probs = measure.next_probs(node.ctx)
        for a in reversed(measure.alphabet.symbols):
            if probs[a] <= ZERO_PROBABILITY:
                continue
            child_state, child_value = process.step(node.state, probs, a)
            stack.append(
                TreeNode(
                    node.prefix + (a,),
                    node.prob * probs[a],
                    measure.advance(node.ctx, a),
                    child_state,
                    child_value,
                )
            )


def expectation_trace(process: MartingaleProcess, measure: PrefixMeasure, horizon: int) -> List[float]:
    """[E[X_0], …, E[X_horizon]] by exact enumeration."""
    sums = [0.0] * (horizon + 1)
    for node in iter_tree(process, measure, horizon):
        sums[len(node.prefix)] += node.prob * node.value
    return sums


def expected_value(process: MartingaleProcess, measure: PrefixMeasure, t: int) -> float:
    """E[X_t] = Σ_{u ∈ Σ^t} P(Γ_u)·X(u)."""
    return expectation_trace(process, measure, t)[t]


def _one_step_defect(condition: Condition, value: float, expectation: float) -> float:
    if condition is Condition.MARTINGALE:
        return abs(expectation - value)
    if condition is Condition.SUPERMARTINGALE:
        return max(0.0, expectation - value)
    return max(0.0, value - expectation)


def verify_martingale(
    process: MartingaleProcess,
    measure: PrefixMeasure,
    depth: int,
    tol: float = DEFAULT_TOLERANCE,
    condition: Condition = Condition.MARTINGALE,
) -> VerificationReport:
    """Exact one-step check of ``process`` under ``measure`` to ``depth``.

    Raises:
        EnumerationLimitError: |Σ|^depth > 2^24.
    """
    check_enumeration(measure.alphabet, depth)
    x0 = process.initial_value
    sums = [0.0] * (depth + 1)
    max_defect = 0.0
    min_value = x0
    nodes = 0

    state = process.initial_state()
    stack: List[Tuple[Prefix, float, Any, Any, float]] = [((), 1.0, measure.root(), state, x0)]
    while stack:
        prefix, prob, ctx, state, value = stack.pop()
        nodes += 1
        sums[len(prefix)] += prob * value
        min_value = min(min_value, value)
        if len(prefix) == depth:
            continue
        probs = measure.next_probs(ctx)
        expectation = 0.0
        for a in measure.alphabet.symbols:
            if probs[a] <= ZERO_PROBABILITY:
                continue
            child_state, child_value = process.step(state, probs, a)
            if child_value is UNDEFINED:
                continue
            expectation += probs[a] * child_value
            stack.append((prefix + (a,), prob * probs[a], measure.advance(ctx, a), child_state, child_value))
        max_defect = max(max_defect, _one_step_defect(condition, value, expectation))

    expectation_defect = max(abs(s - x0) for s in sums)
    if condition is not Condition.MARTINGALE:
        # E[X_t] may drift monotonically; only the one-step inequality is required
        expectation_defect = 0.0
    ok = max_defect <= tol and expectation_defect <= tol and min_value >= -tol
    return VerificationReport(
        depth=depth,
        max_martingale_defect=max_defect,
        max_expectation_defect=expectation_defect,
        min_value=min_value,
        verdict=Verdict.PASS if ok else Verdict.FAIL,
        tolerance=tol,
        condition=condition,
        nodes=nodes,
    )
