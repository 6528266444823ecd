"""Exception hierarchy shared by every module."""


class OpMeanError(Exception):
    """Base class for all errors raised by :mod:`opmean`."""


class NumericalFailure(OpMeanError):
    """An iterative routine did not converge."""


class DomainError(OpMeanError, ValueError):
    """A scalar function was evaluated outside the set where it is finite."""


class NotHermitian(OpMeanError, ValueError):
    pass


class NotPositiveDefinite(OpMeanError, ValueError):
    """Raised with the offending minimum eigenvalue attached."""

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class DimensionMismatch(OpMeanError, ValueError):
    pass


class LinearMean(OpMeanError, ValueError):
    """The operation needs a representing function with f''(1) < 0."""


class PreconditionViolated(OpMeanError, ValueError):
    pass


class SpecParseError(OpMeanError, ValueError):
    """A mean specification string or input file could not be parsed.

    ``position`` is the 0-based character offset of the problem, when known.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
