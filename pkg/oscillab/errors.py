"""
Exception hierarchy for oscillab.

Every concrete error also derives from the builtin that callers would expect
for the same failure (ValueError for bad inputs, RuntimeError for numerical
non-convergence), so ``except ValueError`` keeps working.
"""


class OscillabError(Exception):
    """Root of all oscillab errors."""


class DomainError(OscillabError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ContractError(OscillabError, ValueError):
    """A construction precondition was checked and does not hold."""


class AbsoluteContinuityError(ContractError):
    """Q puts mass on a cylinder that P gives probability zero."""

    def __init__(self, q_mass: float, prefix=None):
        self.q_mass = q_mass
        self.prefix = None if prefix is None else tuple(prefix)
        where = "" if self.prefix is None else f" at prefix u={''.join(map(str, self.prefix))!r}"
        super().__init__(f"Q puts conditional mass {q_mass:.3e} on a P-null extension{where}")


class EnumerationLimitError(OscillabError, ValueError):
    """Exhaustive enumeration would exceed the node budget."""


class NoModelError(OscillabError, ValueError):
    """Every model in a class assigns probability zero to the data."""


class ConfigError(OscillabError, ValueError):
    """A lab configuration could not be resolved."""


class ConvergenceError(OscillabError, RuntimeError):
    """An iterative numerical routine hit its iteration cap."""
