"""
Difference operators on the closed grid.

Λ1, Λ2 are the second central differences, Λ* = Λ1 + Λ2 + c Λ1Λ2 with
c = (h1² + h2²)/12 is the compact nine-point operator, ψ* is the matching
right-hand-side correction, and D_ν is the five-point one-sided outward
normal derivative.
"""

from typing import Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..core.errors import GridError, NonFiniteValueError
from ..core.grid import Grid, GridFunction, BoundaryFunction, boundary_nodes, MIN_INTERVALS

# Five-point one-sided first derivative, exact for quartics.
ONE_SIDED = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0


class InteriorField(BaseModel):
    """Values at the interior nodes i = 1..m-1, j = 1..n-1."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid
    values: np.ndarray

    @model_validator(mode="after")
    def _check_values(self) -> "InteriorField":
        if self.values.shape != self.grid.interior_shape:
            raise GridError(
                f"interior values of shape {self.values.shape}, expected {self.grid.interior_shape}"
            )
        finite = np.isfinite(self.values)
        if not finite.all():
            i, j = np.argwhere(~finite)[0]
            raise NonFiniteValueError("non-finite value in interior field", (int(i) + 1, int(j) + 1))
        return self

    @classmethod
    def zeros(cls, grid: Grid) -> "InteriorField":
        return cls(grid=grid, values=np.zeros(grid.interior_shape))

    @classmethod
    def from_grid_function(cls, F: GridFunction) -> "InteriorField":
        return cls(grid=F.grid, values=F.values[1:-1, 1:-1].copy())

    def __sub__(self, other: "InteriorField") -> "InteriorField":
        return InteriorField(grid=self.grid, values=self.values - other.values)

    def __add__(self, other: "InteriorField") -> "InteriorField":
        return InteriorField(grid=self.grid, values=self.values + other.values)

    def __mul__(self, alpha: float) -> "InteriorField":
        return InteriorField(grid=self.grid, values=alpha * self.values)

    __rmul__ = __mul__


def compact_coefficient(grid: Grid) -> float:
    return (grid.h1 ** 2 + grid.h2 ** 2) / 12.0


def _second_difference_x1(Y: np.ndarray) -> np.ndarray:
    # shape (m - 1, n + 1): every column, interior rows
    return Y[:-2, :] - 2.0 * Y[1:-1, :] + Y[2:, :]


def _second_difference_x2(Y: np.ndarray) -> np.ndarray:
    return Y[:, :-2] - 2.0 * Y[:, 1:-1] + Y[:, 2:]


def apply_lambda1(Y: GridFunction) -> InteriorField:
    values = _second_difference_x1(Y.values)[:, 1:-1] / Y.grid.h1 ** 2
    return InteriorField(grid=Y.grid, values=values)


def apply_lambda2(Y: GridFunction) -> InteriorField:
    values = _second_difference_x2(Y.values)[1:-1, :] / Y.grid.h2 ** 2
    return InteriorField(grid=Y.grid, values=values)


def apply_lambda1_lambda2(Y: GridFunction) -> InteriorField:
    """Λ1Λ2 Y as the nine-point product stencil."""
    grid = Y.grid
    values = _second_difference_x2(_second_difference_x1(Y.values)) / (grid.h1 ** 2 * grid.h2 ** 2)
    return InteriorField(grid=grid, values=values)


def apply_lambda_star(Y: GridFunction) -> InteriorField:
    grid = Y.grid
    values = (
        apply_lambda1(Y).values
        + apply_lambda2(Y).values
        + compact_coefficient(grid) * apply_lambda1_lambda2(Y).values
    )
    return InteriorField(grid=grid, values=values)


def rhs_star(psi: GridFunction) -> InteriorField:
    """ψ* = ψ + (h1²/12) Λ1ψ + (h2²/12) Λ2ψ at the interior nodes."""
    grid = psi.grid
    values = (
        psi.values[1:-1, 1:-1]
        + (grid.h1 ** 2 / 12.0) * apply_lambda1(psi).values
        + (grid.h2 ** 2 / 12.0) * apply_lambda2(psi).values
    )
    return InteriorField(grid=grid, values=values)


def normal_derivative_by_edge(U: GridFunction) -> Dict[str, np.ndarray]:
    """
    Outward D_ν U along each full edge, corners included.

    Keys: "x1=0" and "x1=l1" (indexed by j = 0..n), "x2=0" and "x2=l2"
    (indexed by i = 0..m).
    """
    grid = U.grid
    if grid.m < MIN_INTERVALS or grid.n < MIN_INTERVALS:
        raise GridError("grid too small for the five-point normal derivative")
    Y = U.values
    w = ONE_SIDED
    h1, h2 = grid.h1, grid.h2
    low_x1 = sum(w[k] * Y[k, :] for k in range(5)) / h1
    high_x1 = sum(w[k] * Y[-1 - k, :] for k in range(5)) / h1
    low_x2 = sum(w[k] * Y[:, k] for k in range(5)) / h2
    high_x2 = sum(w[k] * Y[:, -1 - k] for k in range(5)) / h2
    # Each one-sided sum approximates the derivative pointing into the domain.
    return {
        "x1=0": -low_x1,
        "x1=l1": -high_x1,
        "x2=0": -low_x2,
        "x2=l2": -high_x2,
    }


def normal_derivative(U: GridFunction) -> BoundaryFunction:
    """Outward normal derivative on the boundary; corners take the x1-edge value."""
    edges = normal_derivative_by_edge(U)
    values = np.concatenate([
        edges["x1=0"],
        edges["x1=l1"],
        edges["x2=0"][1:-1],
        edges["x2=l2"][1:-1],
    ])
    return BoundaryFunction(grid=U.grid, values=values)
