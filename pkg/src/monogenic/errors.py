"""Exception types shared across the package."""


class MonogenicError(Exception):
    """Base class for all package errors."""


class DomainError(MonogenicError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class InvalidIndexError(MonogenicError, ValueError):
    """A degree/order combination that does not address a valid object."""


class ConfigurationError(MonogenicError, ValueError):
    """A numerical configuration (quadrature size, truncation) is insufficient."""
