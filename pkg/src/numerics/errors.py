"""Exception hierarchy shared by every package.

Each error carries the process exit code the CLI maps it to.
"""
from typing import Any, Optional


class MifbError(Exception):
    """Base class; lets callers tell library failures from builtin ones."""
    exit_code = 1


class ConfigError(MifbError):
    """Raised when an experiment configuration is unreadable or inconsistent."""
    exit_code = 2


class PlotError(MifbError):
    """Raised when a plot cannot be rendered from the given series."""
    exit_code = 2


class InvalidParameterError(MifbError, ValueError):
    """Raised when an argument is outside its admissible range."""


class InvalidDimensionError(InvalidParameterError):
    pass


class InvalidSparsityError(InvalidParameterError):
    pass


class PartitionError(InvalidParameterError):
    """Raised when slices overlap or do not cover the ambient coordinates."""


class InvalidInputError(MifbError, ValueError):
    """Raised when array data is non-finite or otherwise unusable."""


class ShapeError(MifbError, ValueError):
    pass


class DomainError(MifbError, ValueError):
    pass


class SymmetryError(MifbError, ValueError):
    pass


class CapabilityError(MifbError, TypeError):
    """Raised when a problem lacks an operation the analysis needs."""


class RankDeficiencyError(MifbError, ArithmeticError):
    pass


class ConvergenceError(MifbError, ArithmeticError):
    """Raised when an iterative kernel did not converge.

    ``best_estimate`` holds the last approximation.
    """

    def __init__(self, msg: str, best_estimate: Any=None):
        super().__init__(msg)
        self.best_estimate = best_estimate


class DivergenceError(MifbError, ArithmeticError):
    """Raised when an iterate stops being finite; ``trace`` ends at the last finite one."""
    exit_code = 3

    def __init__(self, msg: str, trace: Any=None):
        super().__init__(msg)
        self.trace = trace


class MonitorFailure(MifbError):
    exit_code = 4

    def __init__(self, msg: str, monitor: str, k: int, slack: float, trace: Any=None):
        super().__init__(msg)
        self.monitor = monitor
        self.k = k
        self.slack = slack
        self.trace = trace


class InsufficientDataError(MifbError, ValueError):
    exit_code = 5

    def __init__(self, msg: str, partial: Optional[Any]=None):
        super().__init__(msg)
        self.partial = partial
