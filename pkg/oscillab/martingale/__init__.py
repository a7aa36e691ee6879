"""
Nonnegative martingales, their conversions to and from measures, and exact
tree verification.
"""

from .processes import (
    UNDEFINED,
    is_defined,
    BatchKernel,
    ConstantBatch,
    MultiplicativeBatch,
    SplitBatch,
    MartingaleProcess,
    ConstantProcess,
    MultiplicativeProcess,
    BoundedSplitProcess,
    ScaledProcess,
    constant_process,
    multiplicative_process,
    doubling_process,
    bounded_split_process,
)
from .verification import (
    DEFAULT_TOLERANCE,
    CLOSED_FORM_TOLERANCE,
    Condition,
    Verdict,
    VerificationReport,
    TreeNode,
    iter_tree,
    expectation_trace,
    expected_value,
    verify_martingale,
)
from .conversions import (
    QuotientProcess,
    InducedMeasure,
    quotient_martingale,
    induced_measure,
    belief_process,
    RoundTripReport,
    round_trip_defects,
)

__all__ = [
    "UNDEFINED",
    "is_defined",
    "BatchKernel",
    "ConstantBatch",
    "MultiplicativeBatch",
    "SplitBatch",
    "MartingaleProcess",
    "ConstantProcess",
    "MultiplicativeProcess",
    "BoundedSplitProcess",
    "ScaledProcess",
    "constant_process",
    "multiplicative_process",
    "doubling_process",
    "bounded_split_process",
    "DEFAULT_TOLERANCE",
    "CLOSED_FORM_TOLERANCE",
    "Condition",
    "Verdict",
    "VerificationReport",
    "TreeNode",
    "iter_tree",
    "expectation_trace",
    "expected_value",
    "verify_martingale",
    "QuotientProcess",
    "InducedMeasure",
    "quotient_martingale",
    "induced_measure",
    "belief_process",
    "RoundTripReport",
    "round_trip_defects",
]
