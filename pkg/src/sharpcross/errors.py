"""Exception and warning types shared across the package."""


class SharpCrossError(Exception):
    """Base class for all package errors."""


class DegenerateModel(SharpCrossError, ValueError):
    """The coefficient model cannot produce a non-trivial polynomial."""


class DegenerateOracle(SharpCrossError, ValueError):
    """The joint density of (Q, Q') is singular at the requested point."""


class DomainError(SharpCrossError, ValueError):
    """An argument lies outside the domain of a closed-form expression."""


class ToleranceNotMet(SharpCrossError):
    """Quadrature did not reach the requested tolerance.

    Carries the best available estimate so callers may still use it.
    """

    def __init__(self, message, value=None, est_error=None):
        super().__init__(message)
        self.value = value
        self.est_error = est_error


class GridTooCoarseWarning(UserWarning):
    """Root-finding grid appears to under-resolve close root pairs."""

