"""
oscillab: a laboratory for indefinitely oscillating martingales.

Measures on infinite strings, the martingales they induce, the oscillator
construction with its magnitude schedules, upcrossing and alternation
counters, closed-form crossing bounds, an MDL estimator, and a seeded
Monte Carlo / exact-enumeration lab that checks every bound.
"""

__version__ = "0.1.0"

from .errors import (
    OscillabError,
    DomainError,
    ContractError,
    AbsoluteContinuityError,
    EnumerationLimitError,
    NoModelError,
    ConfigError,
    ConvergenceError,
)

__all__ = [
    "__version__",
    "OscillabError",
    "DomainError",
    "ContractError",
    "AbsoluteContinuityError",
    "EnumerationLimitError",
    "NoModelError",
    "ConfigError",
    "ConvergenceError",
]
