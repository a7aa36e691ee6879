"""
Desk-scale check of the perpetual-entropy condition.

The full condition asks that at every prefix, at some future offset, a next
symbol keeps conditional probability strictly inside (eps, 1 − eps). Only the
offset-zero witness is decidable here: every prefix up to ``depth`` must have
such a symbol immediately. That is a sufficient condition, not the full one.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ..errors import DomainError
from .measures import Prefix, PrefixMeasure


class EntropyStatus(Enum):
    """Outcome of the perpetual-entropy check"""
    PASS = "pass"
    FAIL = "fail"


@dataclass
class EntropyVerdict:
    """Result of ``verify_perpetual_entropy``."""

    status: EntropyStatus
    eps: float
    depth: int
    checked: int
    failing_prefix: Optional[Prefix] = None
    witnesses: List[Tuple[Prefix, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status is EntropyStatus.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "eps": self.eps,
            "depth": self.depth,
            "checked": self.checked,
            "failing_prefix": (
                None if self.failing_prefix is None
                else "".join(str(a) for a in self.failing_prefix)
            ),
        }


def verify_perpetual_entropy(m: PrefixMeasure, eps: float, depth: int) -> EntropyVerdict:
    """Check that each positive-probability prefix of length ≤ depth has a
    next symbol with eps < cond < 1 − eps.

    Args:
        m: Measure to check.
        eps: Entropy margin, 0 < eps < 1/2.
        depth: Deepest prefix length inspected, ≥ 1.

    Returns:
        EntropyVerdict; on failure ``failing_prefix`` is the first prefix
        (depth-first, lowest symbols first) without a witness.
    """
    if not 0.0 < eps < 0.5:
        raise DomainError(f"entropy margin eps={eps!r} must lie in (0, 1/2)")
    if depth < 1:
        raise DomainError(f"depth must be at least 1, got {depth}")

    witnesses: List[Tuple[Prefix, int]] = []
    for prefix, ctx, _prob in m.iter_prefixes(depth):
        probs = m.next_probs(ctx)
        witness = next((a for a, p in enumerate(probs) if eps < p < 1.0 - eps), None)
        if witness is None:
            return EntropyVerdict(
                EntropyStatus.FAIL, eps, depth, len(witnesses) + 1, prefix, witnesses
            )
        witnesses.append((prefix, witness))
    return EntropyVerdict(EntropyStatus.PASS, eps, depth, len(witnesses), None, witnesses)
