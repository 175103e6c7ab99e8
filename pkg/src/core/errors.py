"""
Exception types raised by the triharmonic solver package.
"""

from typing import Optional, Tuple


class TrisolveError(Exception):
    """Base class for all solver errors."""


class GridError(TrisolveError, ValueError):
    """Invalid grid parameters or grid functions living on different grids."""


class SingularOperatorError(TrisolveError, ArithmeticError):
    """A transformed-space eigenvalue of the compact operator is numerically zero."""


class NonFiniteValueError(TrisolveError, ArithmeticError):
    """A grid function or a nonlinearity evaluation produced NaN or infinity."""

    def __init__(self, message: str, node: Optional[Tuple[int, int]] = None):
        if node is not None:
            message = f"{message} at node (i={node[0]}, j={node[1]})"
        super().__init__(message)
        self.node = node


class UndefinedOrderError(TrisolveError, ArithmeticError):
    """An observed-order formula has a zero denominator."""
