"""Exception hierarchy shared by every module."""


class UQFError(Exception):
    """Base class for all package errors."""


class InvalidInput(UQFError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(InvalidInput):
    """A formula was evaluated outside the range where it is defined."""


class BudgetExceeded(UQFError):
    """A combinatorial construction would exceed its configured size cap."""


class SearchExhausted(UQFError):
    """A bounded search ended without finding a valid object."""


class InternalConventionError(UQFError, AssertionError):
    """A runtime self-check on an adopted convention failed."""


class InequalityViolation(UQFError, AssertionError):
    """A certified inequality was observed to fail on concrete data."""
