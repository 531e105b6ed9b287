"""Exception hierarchy shared by every module."""


class TraceGymError(Exception):
    """Base class for all library errors."""


class ShapeError(TraceGymError, ValueError):
    pass


class HermitianityError(TraceGymError, ValueError):
    pass


class DomainError(TraceGymError, ValueError):
    """An argument lies outside the domain of the requested map."""


class NumericalError(TraceGymError, ArithmeticError):
    pass


class DegenerateSpectrumError(TraceGymError, ValueError):
    """Raised when an operation needs at least two distinct eigenvalues."""


class ConvergenceError(TraceGymError, RuntimeError):
    pass


class ResourceError(TraceGymError, MemoryError):
    pass


class ConfigError(TraceGymError, ValueError):
    pass
