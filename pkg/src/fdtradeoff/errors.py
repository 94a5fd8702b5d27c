"""Exception types shared across the package."""


class FdTradeoffError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(FdTradeoffError, ValueError):
    """A scenario or experiment setup is internally inconsistent
    (e.g. fairness floors that no time allocation can satisfy)."""


class PreconditionViolated(FdTradeoffError, ValueError):
    """An operation was called outside its documented domain,
    e.g. a closed-form solver on a pair where full-duplex cannot win."""


class SolverError(FdTradeoffError, RuntimeError):
    """A numeric routine failed in a way that signals a bug, not bad input."""


class ConvergenceError(SolverError):
    """Iteration cap hit before tolerances were met.

    Carries the best iterate found so callers can inspect it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
