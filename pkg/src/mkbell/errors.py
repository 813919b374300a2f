"""Exception types shared across the package."""


class MkBellError(Exception):
    """Base class for all package errors."""


class CapExceeded(MkBellError):
    """A requested instance is larger than the configured dimension cap."""


class BudgetExceeded(MkBellError):
    """An exhaustive enumeration would exceed the configured state budget."""


class DimensionMismatch(MkBellError):
    """A vector's length does not match the scenario's global dimension."""


class NotNormalized(MkBellError):
    """A state vector is not a unit vector within tolerance."""


class ValueOutOfSpectrum(MkBellError):
    """A strategy assigns an outcome outside the spin's spectrum."""


class NotConverged(MkBellError):
    """The iterative eigensolver failed to reach the requested residual."""

    def __init__(self, message, best_value=None, best_residual=None, iterations=0):
        super().__init__(message)
        self.best_value = best_value
        self.best_residual = best_residual
        self.iterations = iterations
