"""
Direct solver for the compact fourth-order Dirichlet problem

    Λ* Y = ψ*  at interior nodes,   Y = b  on the boundary.

Λ1, Λ2 and Λ1Λ2 share the discrete sine eigenbasis, so the interior system is
diagonalised by a two-dimensional type-I DST. Known boundary values are lifted
into the right-hand side first, leaving a homogeneous-Dirichlet problem.
"""

import logging
from functools import lru_cache

import numpy as np
import scipy.fft
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, model_validator

from ..core.errors import GridError, SingularOperatorError
from ..core.grid import Grid, GridFunction, BoundaryFunction
from .stencils import InteriorField, apply_lambda_star, compact_coefficient, rhs_star

logger = logging.getLogger(__name__)

SINGULAR_THRESHOLD = 1e-14


class CompactPoissonSystem(BaseModel):
    """Right-hand side ψ* and Dirichlet data b of one inner solve."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid
    rhs: InteriorField
    boundary: BoundaryFunction

    @model_validator(mode="after")
    def _same_grid(self) -> "CompactPoissonSystem":
        if self.rhs.grid != self.grid or self.boundary.grid != self.grid:
            raise GridError("right-hand side and boundary data must live on the system grid")
        return self


def second_difference_eigenvalues(intervals: int, h: float) -> np.ndarray:
    """λ_p = -(4/h²) sin²(pπ/(2·intervals)), p = 1..intervals-1."""
    p = np.arange(1, intervals)
    return -(4.0 / h ** 2) * np.sin(p * np.pi / (2.0 * intervals)) ** 2


@lru_cache(maxsize=32)
def compact_eigenvalues(grid: Grid) -> np.ndarray:
    """
    Eigenvalues of Λ* on the sine modes, shape (m - 1, n - 1).

    Raises SingularOperatorError if any is numerically zero.
    """
    lam = second_difference_eigenvalues(grid.m, grid.h1)[:, None]
    kap = second_difference_eigenvalues(grid.n, grid.h2)[None, :]
    eig = lam + kap + compact_coefficient(grid) * lam * kap
    threshold = SINGULAR_THRESHOLD * (1.0 / grid.h1 ** 2 + 1.0 / grid.h2 ** 2)
    if np.min(np.abs(eig)) < threshold:
        raise SingularOperatorError(
            f"compact operator is singular on grid m={grid.m}, n={grid.n}: "
            f"min |eigenvalue| = {np.min(np.abs(eig)):.3e} < {threshold:.3e}"
        )
    logger.debug("compact eigenvalues for m=%d, n=%d: min |eig| = %.3e", grid.m, grid.n, np.min(np.abs(eig)))
    eig.flags.writeable = False
    return eig


def _second_difference_matrix(intervals: int, h: float) -> sp.csr_matrix:
    size = intervals - 1
    return sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(size, size), format="csr") / h ** 2


def compact_operator_matrix(grid: Grid) -> sp.csr_matrix:
    """
    Sparse matrix of Λ* on the interior unknowns with zero boundary values.

    Unknowns are ordered as the C-order flattening of the (m - 1, n - 1)
    interior array, i.e. j varies fastest.
    """
    D1 = _second_difference_matrix(grid.m, grid.h1)
    D2 = _second_difference_matrix(grid.n, grid.h2)
    I1 = sp.identity(grid.m - 1, format="csr")
    I2 = sp.identity(grid.n - 1, format="csr")
    A = sp.kron(D1, I2) + sp.kron(I1, D2) + compact_coefficient(grid) * sp.kron(D1, D2)
    return A.tocsr()


def lift_boundary(grid: Grid, boundary: BoundaryFunction) -> GridFunction:
    """Grid function equal to the boundary data on γ_h and zero inside."""
    return GridFunction(grid=grid, values=boundary.scatter(np.zeros(grid.shape)))


def solve_compact_poisson(system: CompactPoissonSystem) -> GridFunction:
    grid = system.grid
    eig = compact_eigenvalues(grid)

    lifted = lift_boundary(grid, system.boundary)
    rhs = system.rhs.values - apply_lambda_star(lifted).values

    rhs_hat = scipy.fft.dstn(rhs, type=1, norm="ortho")
    interior = scipy.fft.idstn(rhs_hat / eig, type=1, norm="ortho")

    values = lifted.values.copy()
    values[1:-1, 1:-1] = interior
    return GridFunction(grid=grid, values=values)


def poisson_step(psi: GridFunction, boundary: BoundaryFunction) -> GridFunction:
    """Solve Λ* Y = ψ* with Y = boundary on γ_h."""
    system = CompactPoissonSystem(grid=psi.grid, rhs=rhs_star(psi), boundary=boundary)
    return solve_compact_poisson(system)


def compact_residual(Y: GridFunction, rhs: InteriorField) -> float:
    """max |Λ*Y - rhs| over the interior nodes."""
    return float(np.max(np.abs(apply_lambda_star(Y).values - rhs.values)))
