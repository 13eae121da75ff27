"""Exception hierarchy shared by all rgzeta modules."""


class RGZetaError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(RGZetaError, ValueError):
    pass


class OrderMismatchError(RGZetaError, ValueError):
    """Two jets of different truncation order were combined."""


class SingularJetError(RGZetaError, ZeroDivisionError):
    """Division by, or logarithm of, a jet whose constant term is not usable."""


class SizeLimitError(RGZetaError):
    pass


class MultiplicityError(RGZetaError):
    """More than one vanishing Laplacian eigenvalue (disconnected graph)."""


class ConvergenceError(RGZetaError):
    def __init__(self, message, last_estimate=None, iterations=None):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.iterations = iterations


class BracketError(RGZetaError):
    pass


class PoleError(RGZetaError, ZeroDivisionError):
    """A recursion denominator vanished at the requested eigenvalue guess."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class DomainError(RGZetaError, ValueError):
    pass


class ConfigError(RGZetaError, ValueError):
    pass
