"""
Tests for the built-in benchmark problems and manufactured chains.
"""

import numpy as np
import pytest

from src.core.grid import unit_square
from src.core.models import ManufacturedSolution
from src.problems.benchmarks import (
    EXAMPLES, example1, example2, example3, example4, get_example,
)
from src.problems.manufactured import discrepancy_ratios, verify_manufactured


@pytest.fixture
def points():
    rng = np.random.default_rng(42)
    return rng.uniform(0.0, 1.0, 1000), rng.uniform(0.0, 1.0, 1000)


def test_example1_exact_solution_value():
    ms = example1().manufactured
    assert ms.u_star(0.5, 0.5) == pytest.approx(2.44140625e-04, rel=1e-14)


@pytest.mark.parametrize("factory", [example1, example4])
def test_manufactured_consistency(factory, points):
    problem = factory()
    ms = problem.manufactured
    x1, x2 = points
    f = problem.f(x1, x2, ms.u_star(x1, x2), ms.lap_u_star(x1, x2), ms.bilap_u_star(x1, x2))
    np.testing.assert_allclose(f, ms.trilap_u_star(x1, x2), atol=1e-12)


def test_example1_boundary_compatibility():
    ms = example1().manufactured
    t = np.linspace(0.0, 1.0, 101)
    zeros, ones = np.zeros_like(t), np.ones_like(t)
    dp = lambda s: 3 * s ** 2 * (s - 1) ** 3 + 3 * s ** 3 * (s - 1) ** 2
    p = lambda s: s ** 3 * (s - 1) ** 3
    for x1, x2 in [(zeros, t), (ones, t), (t, zeros), (t, ones)]:
        assert np.max(np.abs(ms.u_star(x1, x2))) <= 1e-14
        assert np.max(np.abs(ms.lap_u_star(x1, x2))) <= 1e-14
        gradient_x1 = dp(x1) * p(x2)
        gradient_x2 = p(x1) * dp(x2)
        assert np.max(np.abs(gradient_x1)) <= 1e-14 and np.max(np.abs(gradient_x2)) <= 1e-14
    assert example1().homogeneous


def test_example2_nonlinearity():
    f = example2().f
    assert f(0.3, 0.7, 0.0, 0.0, 0.0) == pytest.approx(0.3 ** 6 + 0.7 ** 6)
    assert f(1.0, 1.0, 0.0, 0.0, 0.0) == pytest.approx(2.0)
    assert f(0.4, 0.2, 5.0, np.pi, -3.0) == pytest.approx(0.4 ** 6 + 0.2 ** 6, abs=1e-14)
    assert example2().exact_solution is None


def test_example3_nonlinearity():
    f = example3().f
    assert f(0.5, 0.5, 0.0, 0.0, 0.0) == pytest.approx(-np.pi ** 3)
    x1, x2 = 0.2, 0.9
    base = -np.pi ** 3 * np.sin(np.pi * x1) * np.sin(np.pi * x2)
    assert f(x1, x2, 1.0, 1.0, 2.0) == pytest.approx(base)
    assert f(x1, x2, 0.0, 0.0, 0.0) == pytest.approx(base)


def test_example4_boundary_data():
    problem = example4()
    assert not problem.homogeneous
    assert problem.g2(0.0, 0.5, -1.0, 0.0) == pytest.approx(-np.sin(0.5))
    assert problem.g2(1.0, 0.5, 1.0, 0.0) == pytest.approx(np.e * np.sin(0.5))
    assert problem.g2(0.3, 0.0, 0.0, -1.0) == pytest.approx(-np.exp(0.3))
    assert problem.g2(0.3, 1.0, 0.0, 1.0) == pytest.approx(np.exp(0.3) * np.cos(1.0))
    assert problem.g1(0.2, 0.4) == pytest.approx(np.exp(0.2) * np.sin(0.4))
    assert np.all(problem.g3(np.array([0.0, 1.0]), np.array([0.3, 0.6])) == 0.0)


def test_example4_is_harmonic(points):
    ms = example4().manufactured
    x1, x2 = points
    h = 1e-3
    lap = (ms.u_star(x1 + h, x2) + ms.u_star(x1 - h, x2) + ms.u_star(x1, x2 + h) + ms.u_star(x1, x2 - h)
           - 4 * ms.u_star(x1, x2)) / h ** 2
    assert np.max(np.abs(lap)) < 1e-5


def test_verify_manufactured_example1_ratios():
    ms = example1().manufactured
    d32, d64, d128 = (verify_manufactured(ms, unit_square(N)) for N in (32, 64, 128))
    assert 3.5 <= discrepancy_ratios(d32, d64)[0] <= 4.5
    # the higher links leave the pre-asymptotic range one grid later
    for ratio in discrepancy_ratios(d64, d128):
        assert 3.5 <= ratio <= 4.5


def test_verify_manufactured_example4_ratios():
    ms = example4().manufactured
    coarse = verify_manufactured(ms, unit_square(32))
    fine = verify_manufactured(ms, unit_square(64))
    assert coarse.discrepancies[1:] == [0.0, 0.0]
    assert 3.5 <= discrepancy_ratios(coarse, fine)[0] <= 4.5


def test_verify_manufactured_constant_chain():
    zero = lambda x1, x2: 0.0 * x1
    ms = ManufacturedSolution(u_star=lambda x1, x2: 3.0 + 0.0 * x1, lap_u_star=zero,
                              bilap_u_star=zero, trilap_u_star=zero)
    assert verify_manufactured(ms, unit_square(16)).discrepancies == [0.0, 0.0, 0.0]


def test_example_catalogue():
    assert set(EXAMPLES) == {"1", "2", "3", "4", "zero"}
    assert get_example("3").name == "example3"
    with pytest.raises(ValueError):
        get_example("7")
