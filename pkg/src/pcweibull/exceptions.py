"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class BracketError(ValueError):
    """A root bracket does not enclose a sign change."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The best available estimate and its error are kept on the exception so
    callers can decide whether it is good enough.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class SaturationError(ArithmeticError):
    """A shape/distance value is beyond the representable range."""


class NumericError(ArithmeticError):
    """A likelihood or posterior evaluation produced a non-finite value."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CapabilityError(ValueError):
    """The requested engine cannot handle the problem size."""
