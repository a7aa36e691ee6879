"""
Closed-form crossing bounds and the reports that pair them with estimates.
"""

from .inequalities import (
    LOG_SQUARED_VALIDITY,
    GapExample,
    ExpectationGap,
    dubins_bound,
    doob_bound_xu,
    doob_xu_cap,
    doob_bound_classic,
    doob_bound_durrett,
    doob_bound_downcrossing,
    dubins_tight_probability,
    doob_tight_expectation,
    doob_weak_lower_bound,
    oscillation_event_lower_bound,
    expected_upcrossings_lower_bound,
    log_squared_upcrossing_bound,
    log_squared_expectation_bound,
    alternation_probability_bound,
    davis_bound,
    alternation_expectation_bound,
    summable_gap_example,
    doob_expectation_gap,
)
from .reports import SIGMA_BAND, Direction, BoundVerdict, Estimate, BoundReport, assess

__all__ = [
    "LOG_SQUARED_VALIDITY",
    "GapExample",
    "ExpectationGap",
    "dubins_bound",
    "doob_bound_xu",
    "doob_xu_cap",
    "doob_bound_classic",
    "doob_bound_durrett",
    "doob_bound_downcrossing",
    "dubins_tight_probability",
    "doob_tight_expectation",
    "doob_weak_lower_bound",
    "oscillation_event_lower_bound",
    "expected_upcrossings_lower_bound",
    "log_squared_upcrossing_bound",
    "log_squared_expectation_bound",
    "alternation_probability_bound",
    "davis_bound",
    "alternation_expectation_bound",
    "summable_gap_example",
    "doob_expectation_gap",
    "SIGMA_BAND",
    "Direction",
    "BoundVerdict",
    "Estimate",
    "BoundReport",
    "assess",
]
