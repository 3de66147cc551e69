"""Exception hierarchy shared by the numerical kernels."""


class ScatteringError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(ScatteringError, ValueError):
    """Input outside the domain an operation accepts."""


class PoleError(ParameterError):
    """Gamma or hypergeometric argument sits on a pole."""


class ConvergenceError(ScatteringError, ArithmeticError):
    """A series or iteration exhausted its budget before reaching tolerance."""


class SingularSystemError(ScatteringError, ArithmeticError):
    """The matching system is numerically singular."""


class ResolutionError(ParameterError):
    """Integration step too coarse for the local wavenumber."""


class GrowthError(ScatteringError, ArithmeticError):
    """Integrated solution blew up or became non-finite."""


class SweepError(ScatteringError):
    """Too many failed points in a sweep, or no resonance where one is required."""
