"""
Upcrossings, the uniform events E_{m,m}, α-alternations and the tightness
criterion, counted exactly from value paths.
"""

from .counters import (
    ALTERNATION_SLACK,
    TIGHTNESS_TOLERANCE,
    DOWN_FIRST,
    UP_FIRST,
    CrossingTally,
    AlternationTally,
    TightnessVerdict,
    UpcrossingScan,
    AlternationScan,
    count_upcrossings,
    count_downcrossings,
    count_alternations,
    event_emm,
    check_tightness_criterion,
)
from .trackers import UpcrossingTracker, AlternationTracker

__all__ = [
    "ALTERNATION_SLACK",
    "TIGHTNESS_TOLERANCE",
    "DOWN_FIRST",
    "UP_FIRST",
    "CrossingTally",
    "AlternationTally",
    "TightnessVerdict",
    "UpcrossingScan",
    "AlternationScan",
    "count_upcrossings",
    "count_downcrossings",
    "count_alternations",
    "event_emm",
    "check_tightness_criterion",
    "UpcrossingTracker",
    "AlternationTracker",
]
