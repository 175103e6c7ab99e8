"""
Tests for the fast compact Poisson solver against a dense elimination oracle
and manufactured solutions.
"""

import itertools
import math

import numpy as np
import pytest
import scipy.linalg

from src.core.errors import SingularOperatorError
from src.core.grid import BoundaryFunction, GridFunction, boundary_nodes, diff_norm, make_grid, unit_square
from src.numerics import fast_poisson
from src.numerics.fast_poisson import (
    CompactPoissonSystem, compact_eigenvalues, compact_operator_matrix, compact_residual,
    poisson_step, solve_compact_poisson,
)
from src.numerics.stencils import InteriorField, apply_lambda_star, rhs_star


def dense_oracle(grid, rhs, boundary):
    """Explicit nine-point system on every closed-grid node, solved by LU."""
    m, n = grid.m, grid.n
    a, b = 1 / grid.h1 ** 2, 1 / grid.h2 ** 2
    d = (grid.h1 ** 2 + grid.h2 ** 2) / 12 * a * b
    index = lambda i, j: i * (n + 1) + j
    size = (m + 1) * (n + 1)
    A = np.zeros((size, size))
    f = np.zeros(size)

    ii, jj = boundary_nodes(grid)
    for i, j, value in zip(ii, jj, boundary.values):
        A[index(i, j), index(i, j)] = 1.0
        f[index(i, j)] = value

    for i in range(1, m):
        for j in range(1, n):
            row = index(i, j)
            A[row, index(i, j)] = -2 * a - 2 * b + 4 * d
            for di in (-1, 1):
                A[row, index(i + di, j)] = a - 2 * d
            for dj in (-1, 1):
                A[row, index(i, j + dj)] = b - 2 * d
            for di, dj in itertools.product((-1, 1), repeat=2):
                A[row, index(i + di, j + dj)] = d
            f[row] = rhs.values[i - 1, j - 1]

    solution = scipy.linalg.lu_solve(scipy.linalg.lu_factor(A), f)
    return solution.reshape(m + 1, n + 1)


def random_system(grid, rng):
    rhs = InteriorField(grid=grid, values=rng.uniform(-1, 1, grid.interior_shape))
    boundary = BoundaryFunction(grid=grid, values=rng.uniform(-1, 1, grid.boundary_size))
    return CompactPoissonSystem(grid=grid, rhs=rhs, boundary=boundary)


def test_zero_data_gives_zero():
    grid = unit_square(8)
    system = CompactPoissonSystem(grid=grid, rhs=InteriorField.zeros(grid), boundary=BoundaryFunction.zeros(grid))
    assert np.all(solve_compact_poisson(system).values == 0.0)


def test_unit_boundary_gives_constant():
    grid = make_grid(1.0, 2.0, 8, 11)
    system = CompactPoissonSystem(grid=grid, rhs=InteriorField.zeros(grid),
                                  boundary=BoundaryFunction.constant(grid, 1.0))
    np.testing.assert_allclose(solve_compact_poisson(system).values, 1.0, atol=1e-12)


@pytest.mark.parametrize("m,n", list(itertools.product(range(5, 9), repeat=2)))
def test_matches_dense_elimination(m, n):
    rng = np.random.default_rng(100 * m + n)
    grid = make_grid(1.0, 1.0, m, n)
    for _ in range(20):
        system = random_system(grid, rng)
        Y = solve_compact_poisson(system)
        expected = dense_oracle(grid, system.rhs, system.boundary)
        assert np.max(np.abs(Y.values - expected)) <= 1e-10


@pytest.mark.parametrize("m,n,l1,l2", [(8, 8, 1.0, 1.0), (16, 12, 2.0, 1.0), (33, 20, 1.0, 0.5)])
def test_residual_and_boundary_contracts(m, n, l1, l2):
    rng = np.random.default_rng(7)
    grid = make_grid(l1, l2, m, n)
    system = random_system(grid, rng)
    Y = solve_compact_poisson(system)
    scale = max(1.0, float(np.max(np.abs(system.rhs.values))))
    assert compact_residual(Y, system.rhs) <= 1e-10 * scale
    np.testing.assert_array_equal(BoundaryFunction.from_grid_function(Y).values, system.boundary.values)


def test_eigenvalues_match_operator_on_sine_modes():
    grid = make_grid(1.0, 1.5, 9, 7)
    eig = compact_eigenvalues(grid)
    i = np.arange(grid.m + 1)[:, None]
    j = np.arange(grid.n + 1)[None, :]
    for p, q in [(1, 1), (3, 5), (8, 6), (4, 2)]:
        mode = GridFunction(grid=grid, values=np.sin(p * np.pi * i / grid.m) * np.sin(q * np.pi * j / grid.n))
        np.testing.assert_allclose(apply_lambda_star(mode).values, eig[p - 1, q - 1] * mode.values[1:-1, 1:-1],
                                   atol=1e-9)


def test_operator_matrix_matches_stencil():
    rng = np.random.default_rng(11)
    grid = make_grid(1.0, 1.0, 7, 9)
    values = np.zeros(grid.shape)
    values[1:-1, 1:-1] = rng.standard_normal(grid.interior_shape)
    Y = GridFunction(grid=grid, values=values)
    A = compact_operator_matrix(grid)
    np.testing.assert_allclose(A @ values[1:-1, 1:-1].ravel(), apply_lambda_star(Y).values.ravel(), atol=1e-9)


def test_singular_operator_is_reported(monkeypatch):
    grid = make_grid(1.0, 3.0, 11, 13)
    compact_eigenvalues.cache_clear()
    monkeypatch.setattr(fast_poisson, "SINGULAR_THRESHOLD", 1e6)
    try:
        with pytest.raises(SingularOperatorError):
            compact_eigenvalues(grid)
    finally:
        compact_eigenvalues.cache_clear()


def test_poisson_step_zero():
    grid = unit_square(8)
    assert np.all(poisson_step(GridFunction.zeros(grid), BoundaryFunction.zeros(grid)).values == 0.0)


def test_poisson_step_equals_solve_of_rhs_star():
    rng = np.random.default_rng(5)
    grid = make_grid(1.0, 1.0, 10, 12)
    psi = GridFunction(grid=grid, values=rng.standard_normal(grid.shape))
    boundary = BoundaryFunction(grid=grid, values=rng.standard_normal(grid.boundary_size))
    direct = solve_compact_poisson(CompactPoissonSystem(grid=grid, rhs=rhs_star(psi), boundary=boundary))
    np.testing.assert_array_equal(poisson_step(psi, boundary).values, direct.values)


def test_sine_solution_is_fourth_order():
    u = lambda x1, x2: np.sin(np.pi * x1) * np.sin(np.pi * x2)
    errors = {}
    for N in (16, 32, 64):
        grid = unit_square(N)
        psi = GridFunction.from_callable(grid, lambda x1, x2: -2 * np.pi ** 2 * u(x1, x2))
        Y = poisson_step(psi, BoundaryFunction.zeros(grid))
        errors[N] = diff_norm(Y, GridFunction.from_callable(grid, u))
    assert errors[32] <= 1e-4
    for N in (16, 32):
        order = math.log2(errors[N] / errors[2 * N])
        assert 3.7 <= order <= 4.3


def test_harmonic_boundary_data_is_at_least_fourth_order():
    # On a square grid the nine-point stencil is O(h⁶) for harmonic functions.
    u = lambda x1, x2: np.exp(x1) * np.sin(x2)
    errors = {}
    for N in (16, 32, 64):
        grid = unit_square(N)
        Y = poisson_step(GridFunction.zeros(grid), BoundaryFunction.from_callable(grid, u))
        errors[N] = diff_norm(Y, GridFunction.from_callable(grid, u))
    # e^x sin y makes the truncation terms cancel; past N = 32 only round-off is left.
    assert errors[16] <= 1e-7
    assert errors[16] / errors[32] >= 16 * 0.75
    assert errors[32] <= 1e-12 and errors[64] <= 1e-12


def test_nonhomogeneous_data_is_fourth_order():
    u = lambda x1, x2: np.sin(x1 + 2 * x2) + x1 ** 2 * x2
    lap_u = lambda x1, x2: -5 * np.sin(x1 + 2 * x2) + 2 * x2
    errors = {}
    for N in (16, 32, 64):
        grid = make_grid(1.0, 1.0, N, N)
        Y = poisson_step(GridFunction.from_callable(grid, lap_u), BoundaryFunction.from_callable(grid, u))
        errors[N] = diff_norm(Y, GridFunction.from_callable(grid, u))
    for N in (16, 32):
        assert 16 * 0.75 <= errors[N] / errors[2 * N] <= 16 * 1.25
