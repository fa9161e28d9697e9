"""Exception types raised across the package."""


class FloquetError(Exception):
    """Base class for all package errors."""


class PairLost(FloquetError):
    """All three characteristic roots are real somewhere on the speed grid."""


class NoCrossing(FloquetError):
    """The real part of the complex pair does not change sign on the bracket."""


class NoConvergence(FloquetError):
    """Newton iteration for a periodic orbit did not converge."""

    def __init__(self, message, eps=None):
        super().__init__(message)
        self.eps = eps


class CollapsedToZero(FloquetError):
    """Newton iteration converged to the trivial (zero) profile."""

    def __init__(self, message, eps=None):
        super().__init__(message)
        self.eps = eps


class ThetaOutOfRange(FloquetError, ValueError):
    """Floquet exponent outside ``(-pi, pi]``."""


class EigFailure(FloquetError):
    """Dense eigensolver failed or returned inaccurate eigenpairs."""

    def __init__(self, message, theta=None):
        super().__init__(message)
        self.theta = theta


class ConfigError(FloquetError, ValueError):
    """Invalid run configuration."""
