"""Exception types shared across the package."""


class CensusError(Exception):
    """Base class for all package errors."""


class DomainError(CensusError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(CensusError):
    """A request exceeds a configured size budget (sieve range, search box, ...)."""
