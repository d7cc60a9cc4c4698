"""Exception hierarchy shared by every slabgreen module."""


class SlabGreenError(Exception):
    """Base class for all numerical and configuration errors raised here."""


class DomainError(SlabGreenError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class CapacityError(SlabGreenError, ValueError):
    """A requested order or index exceeds a configured hard cap."""


class ValidityError(SlabGreenError, ValueError):
    """An approximation is requested outside its guarded validity range."""


class BetaOverflowError(SlabGreenError, OverflowError):
    """An intermediate quantity overflowed; never returned as a silent inf."""


class PrecisionLossError(SlabGreenError, ArithmeticError):
    """Cancellation or an unconverged recurrence would leave uncertified digits."""


class ConvergenceError(SlabGreenError, ArithmeticError):
    """A truncated series could not meet its tolerance within its term cap.

    ``achieved`` carries the best bound reached before giving up.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NumericalError(SlabGreenError, ArithmeticError):
    """Root bracketing or a quadrature cross-check failed."""
