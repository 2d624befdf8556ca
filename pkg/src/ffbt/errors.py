"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """An argument is outside the accepted set (bad order, non-finite input, ...)."""


class DomainError(ValueError):
    """A coordinate lies outside the domain a function is defined on."""


class SamplingError(ValueError):
    """A user function returned a non-finite value at a grid node."""


class GridMismatchError(ValueError):
    """A sampled field does not live on the grid the operation requires."""


class NearResonanceError(ArithmeticError):
    """pi^2 |k|^2 is too close to z_{m,n}^2 for the kernel to be meaningful."""


class OutOfRegimeError(ValueError):
    """A frequency lies outside the band where the error bounds hold."""
