"""
Uniform rectangular grid, grid functions on the closed grid and on its boundary.

Nodes are indexed (i, j) with i = 0..m along x1 and j = 0..n along x2; node
(i, j) sits at (i*h1, j*h2). Values are stored as numpy arrays of shape
(m + 1, n + 1) with `indexing="ij"` layout.
"""

import math
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import GridError, NonFiniteValueError

# The one-sided normal derivative needs five nodes per grid line.
MIN_INTERVALS = 5


class Grid(BaseModel):
    """Uniform grid on the rectangle [0, l1] x [0, l2]."""
    model_config = ConfigDict(frozen=True)

    l1: float = Field(..., gt=0, description="Edge length along x1")
    l2: float = Field(..., gt=0, description="Edge length along x2")
    m: int = Field(..., ge=MIN_INTERVALS, description="Intervals along x1")
    n: int = Field(..., ge=MIN_INTERVALS, description="Intervals along x2")

    @property
    def h1(self) -> float:
        return self.l1 / self.m

    @property
    def h2(self) -> float:
        return self.l2 / self.n

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.m + 1, self.n + 1)

    @property
    def interior_shape(self) -> Tuple[int, int]:
        return (self.m - 1, self.n - 1)

    @property
    def boundary_size(self) -> int:
        return 2 * (self.m + 1) + 2 * (self.n - 1)

    def x1(self) -> np.ndarray:
        return np.arange(self.m + 1) * self.h1

    def x2(self) -> np.ndarray:
        return np.arange(self.n + 1) * self.h2

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Coordinates of every closed-grid node."""
        return np.meshgrid(self.x1(), self.x2(), indexing="ij")

    def is_refinement_of(self, coarse: "Grid") -> bool:
        return (
            self.m == 2 * coarse.m
            and self.n == 2 * coarse.n
            and math.isclose(self.l1, coarse.l1, rel_tol=1e-12)
            and math.isclose(self.l2, coarse.l2, rel_tol=1e-12)
        )


def make_grid(l1: float, l2: float, m: int, n: int) -> Grid:
    """Build a grid, rejecting too few intervals or non-positive lengths."""
    if l1 <= 0 or l2 <= 0:
        raise GridError(f"domain lengths must be positive, got l1={l1}, l2={l2}")
    if m < MIN_INTERVALS or n < MIN_INTERVALS:
        raise GridError(
            f"need at least {MIN_INTERVALS} intervals per direction for the "
            f"five-point normal derivative, got m={m}, n={n}"
        )
    return Grid(l1=l1, l2=l2, m=m, n=n)


def unit_square(N: int) -> Grid:
    return make_grid(1.0, 1.0, N, N)


def _check_finite(values: np.ndarray, what: str) -> None:
    finite = np.isfinite(values)
    if not finite.all():
        bad = np.argwhere(~finite)[0]
        node = (int(bad[0]), int(bad[1])) if bad.size == 2 else None
        raise NonFiniteValueError(f"non-finite value in {what}", node)


class GridFunction(BaseModel):
    """Real values on all (m + 1)(n + 1) nodes of the closed grid."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid
    values: np.ndarray

    @model_validator(mode="after")
    def _check_values(self) -> "GridFunction":
        if self.values.shape != self.grid.shape:
            raise GridError(f"values of shape {self.values.shape} do not fit grid shape {self.grid.shape}")
        _check_finite(self.values, "grid function")
        return self

    @classmethod
    def zeros(cls, grid: Grid) -> "GridFunction":
        return cls(grid=grid, values=np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "GridFunction":
        return cls(grid=grid, values=np.full(grid.shape, float(c)))

    @classmethod
    def from_callable(cls, grid: Grid, fn: Callable[..., np.ndarray]) -> "GridFunction":
        """Sample fn(x1, x2) at every node."""
        X1, X2 = grid.mesh()
        values = np.broadcast_to(np.asarray(fn(X1, X2), dtype=float), grid.shape).copy()
        return cls(grid=grid, values=values)

    def _other_values(self, other):
        if isinstance(other, GridFunction):
            _require_same_grid(self, other)
            return other.values
        return other

    def __add__(self, other) -> "GridFunction":
        return GridFunction(grid=self.grid, values=self.values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other) -> "GridFunction":
        return GridFunction(grid=self.grid, values=self.values - self._other_values(other))

    def __mul__(self, alpha: float) -> "GridFunction":
        return GridFunction(grid=self.grid, values=alpha * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(grid=self.grid, values=-self.values)


def _require_same_grid(F: GridFunction, G: GridFunction) -> None:
    if F.grid != G.grid:
        raise GridError(f"grid mismatch: {F.grid!r} vs {G.grid!r}")


def max_norm(F: GridFunction) -> float:
    """Discrete maximum norm over all closed-grid nodes."""
    return float(np.max(np.abs(F.values)))


def diff_norm(F: GridFunction, G: GridFunction) -> float:
    _require_same_grid(F, G)
    return float(np.max(np.abs(F.values - G.values)))


def restrict_to_coarse(F_fine: GridFunction, coarse: Grid) -> GridFunction:
    """Inject fine-grid values at the nodes shared with a grid of half the resolution."""
    if not F_fine.grid.is_refinement_of(coarse):
        raise GridError(
            f"grid (m={F_fine.grid.m}, n={F_fine.grid.n}) is not a 2x refinement of "
            f"(m={coarse.m}, n={coarse.n}) on the same rectangle"
        )
    return GridFunction(grid=coarse, values=F_fine.values[::2, ::2].copy())


@lru_cache(maxsize=None)
def boundary_nodes(grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
    """
    Index arrays (i, j) of the boundary nodes, each node once.

    Order: x1 = 0 edge (j = 0..n), x1 = l1 edge (j = 0..n), x2 = 0 edge
    (i = 1..m-1), x2 = l2 edge (i = 1..m-1). Corners belong to the x1 edges.
    """
    m, n = grid.m, grid.n
    j_full = np.arange(n + 1)
    i_inner = np.arange(1, m)
    ii = np.concatenate([np.zeros(n + 1, int), np.full(n + 1, m), i_inner, i_inner])
    jj = np.concatenate([j_full, j_full, np.zeros(m - 1, int), np.full(m - 1, n)])
    ii.flags.writeable = False
    jj.flags.writeable = False
    return ii, jj


@lru_cache(maxsize=None)
def outward_normals(grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
    """Outward unit normal (nu1, nu2) at each boundary node, in boundary_nodes order."""
    m, n = grid.m, grid.n
    nu1 = np.concatenate([np.full(n + 1, -1.0), np.full(n + 1, 1.0), np.zeros(2 * (m - 1))])
    nu2 = np.concatenate([np.zeros(2 * (n + 1)), np.full(m - 1, -1.0), np.full(m - 1, 1.0)])
    nu1.flags.writeable = False
    nu2.flags.writeable = False
    return nu1, nu2


class BoundaryFunction(BaseModel):
    """Real values on the boundary nodes, ordered as in `boundary_nodes`."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid
    values: np.ndarray

    @model_validator(mode="after")
    def _check_values(self) -> "BoundaryFunction":
        if self.values.shape != (self.grid.boundary_size,):
            raise GridError(
                f"boundary values of shape {self.values.shape}, expected ({self.grid.boundary_size},)"
            )
        if not np.isfinite(self.values).all():
            k = int(np.argwhere(~np.isfinite(self.values))[0][0])
            ii, jj = boundary_nodes(self.grid)
            raise NonFiniteValueError("non-finite boundary value", (int(ii[k]), int(jj[k])))
        return self

    @classmethod
    def zeros(cls, grid: Grid) -> "BoundaryFunction":
        return cls(grid=grid, values=np.zeros(grid.boundary_size))

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "BoundaryFunction":
        return cls(grid=grid, values=np.full(grid.boundary_size, float(c)))

    @classmethod
    def coordinates(cls, grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
        ii, jj = boundary_nodes(grid)
        return ii * grid.h1, jj * grid.h2

    @classmethod
    def from_callable(cls, grid: Grid, fn: Callable[..., np.ndarray]) -> "BoundaryFunction":
        """Sample fn(x1, x2) at the boundary nodes."""
        x1, x2 = cls.coordinates(grid)
        values = np.broadcast_to(np.asarray(fn(x1, x2), dtype=float), x1.shape).copy()
        return cls(grid=grid, values=values)

    @classmethod
    def from_normal_callable(cls, grid: Grid, fn: Callable[..., np.ndarray]) -> "BoundaryFunction":
        """Sample fn(x1, x2, nu1, nu2) with the outward unit normal of each node."""
        x1, x2 = cls.coordinates(grid)
        nu1, nu2 = outward_normals(grid)
        values = np.broadcast_to(np.asarray(fn(x1, x2, nu1, nu2), dtype=float), x1.shape).copy()
        return cls(grid=grid, values=values)

    @classmethod
    def from_grid_function(cls, F: GridFunction) -> "BoundaryFunction":
        ii, jj = boundary_nodes(F.grid)
        return cls(grid=F.grid, values=F.values[ii, jj].copy())

    def scatter(self, target: np.ndarray) -> np.ndarray:
        """Write the boundary values into a closed-grid array in place."""
        ii, jj = boundary_nodes(self.grid)
        target[ii, jj] = self.values
        return target

    def __sub__(self, other: "BoundaryFunction") -> "BoundaryFunction":
        if self.grid != other.grid:
            raise GridError("boundary functions live on different grids")
        return BoundaryFunction(grid=self.grid, values=self.values - other.values)

    def __add__(self, other: "BoundaryFunction") -> "BoundaryFunction":
        if self.grid != other.grid:
            raise GridError("boundary functions live on different grids")
        return BoundaryFunction(grid=self.grid, values=self.values + other.values)

    def __mul__(self, alpha: float) -> "BoundaryFunction":
        return BoundaryFunction(grid=self.grid, values=alpha * self.values)

    __rmul__ = __mul__
