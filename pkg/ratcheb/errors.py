"""
ratcheb - Errors Module

This module defines the exceptions raised by ratcheb. Every class derives
from a builtin exception so callers can keep catching ValueError or
ArithmeticError.
"""

from typing import Optional, Sequence


class RatchebError(Exception):
    """Root of all ratcheb exceptions."""


class ArgumentError(RatchebError, ValueError):
    """Raised for malformed arguments (short lists, bad weights, bad literals)."""


class UsageError(ArgumentError):
    """
    Raised by the command line parser.

    Attributes:
        flag (str): The offending flag, if known.
    """

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message)
        self.flag = flag


class DomainError(RatchebError, ValueError):
    """Raised when a point lies where the operation is undefined (on E, at a pole)."""


class NumericError(RatchebError, ArithmeticError):
    """
    Raised when a numerical kernel fails.

    Attributes:
        residuals (list): Residuals achieved before giving up.
    """

    def __init__(self, message: str, residuals: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else []


class ConvergenceError(NumericError):
    """
    Raised when the exchange iteration hits its cap.

    Attributes:
        defect (float): Last equioscillation defect.
        iterations (int): Iterations performed.
    """

    def __init__(self, message: str, defect: float, iterations: int):
        super().__init__(message, [defect])
        self.defect = defect
        self.iterations = iterations


class IntegrityError(NumericError):
    """Raised when an internal invariant fails (e.g. complex +-1 points of an extremal function)."""
