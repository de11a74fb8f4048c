# src/utils/exceptions.py

"""
Exception hierarchy shared by the GP machinery, the optimizers, the benchmarks and the CLI.
"""

from typing import Optional


class GiboError(Exception):
    """Base class for all errors raised by this package."""


class InputError(GiboError, ValueError):
    """Invalid argument: dimension mismatch, empty search box, bad sizes."""


class ConditioningError(GiboError):
    """A kernel matrix or Schur complement is not positive definite."""


class FittingError(GiboError):
    """Hyperparameter fitting produced no finite objective from any start."""


class DegenerateGradientError(GiboError):
    """The gradient has (numerically) zero Mahalanobis norm."""


class SolverError(GiboError):
    """A Riccati solve did not converge."""


class StabilityError(GiboError):
    """A closed-loop matrix is not Schur stable where stability is required."""


class NormalizationError(GiboError):
    """The regret normalization denominator vanishes."""


class ConfigError(GiboError, ValueError):
    """Invalid experiment configuration; `field_path` names the offending entry."""

    def __init__(self, message: str, field_path: Optional[str] = None):
        self.field_path = field_path
        if field_path:
            message = f"{field_path}: {message}"
        super().__init__(message)


class ParseError(GiboError, ValueError):
    """Malformed results file; `line_number` is 1-based and counts the header."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
