"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class PreconditionError(ValueError):
    """A closed form was requested outside its validity region."""


class ConvergenceError(ArithmeticError):
    """An iterative method stopped before reaching its tolerance."""

    def __init__(self, message, *, estimate=None, error=None, bracket=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.bracket = bracket


class SingularHessianError(ArithmeticError):
    """Observed information is singular, so standard errors do not exist."""


class DegenerateDataError(ValueError):
    """The sample carries no information (e.g. all values identical)."""
