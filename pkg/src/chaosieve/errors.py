"""Exception hierarchy shared by every module.

Each class maps to one CLI exit code (see ``chaosieve.cli``).
"""


class ChaosieveError(Exception):
    exit_code = 1


class DomainError(ChaosieveError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 2


class DivergenceError(DomainError):
    """The requested integral does not converge (e.g. the pole at k=1)."""


class DegenerateInputError(DomainError):
    pass


class CapacityError(ChaosieveError):
    """Input is valid but beyond what the implementation supports."""

    exit_code = 3


class InsufficientDataError(ChaosieveError, ValueError):
    exit_code = 4


class InsufficientSamplesError(InsufficientDataError):
    """Too few Monte Carlo points landed in the region of interest."""
