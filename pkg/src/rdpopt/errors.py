"""Exception types shared across the package."""


class AccountingError(Exception):
    """Base class for every error this package raises deliberately."""


class DomainError(AccountingError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InfeasibleError(AccountingError):
    """No value in the searched region can satisfy the requested constraint."""


class BracketRangeError(AccountingError):
    """Inversion target falls outside the value range attained on the bracket."""

    def __init__(self, message: str, lo_value: float | None = None, hi_value: float | None = None):
        super().__init__(message)
        self.lo_value = lo_value
        self.hi_value = hi_value
