"""
The four benchmark problems on the unit square.

Examples 1 and 4 are manufactured from a known solution u*; Examples 2 and 3
have no closed-form solution and are studied with the successive-difference
criterion.
"""

from typing import Callable, Dict

import numpy as np
from numpy.polynomial import Polynomial

from ..core.models import ManufacturedSolution, ProblemSpec, StopCriterion

# p(t) = t³(t - 1)³
_P = Polynomial([0.0, 0.0, 0.0, -1.0, 3.0, -3.0, 1.0])
_P2 = _P.deriv(2)
_P4 = _P.deriv(4)
_P6 = _P.deriv(6)


def example1_manufactured() -> ManufacturedSolution:
    """u* = p(x1) p(x2) and its Laplacians, by separability."""

    def u_star(x1, x2):
        return _P(x1) * _P(x2)

    def lap(x1, x2):
        return _P2(x1) * _P(x2) + _P(x1) * _P2(x2)

    def bilap(x1, x2):
        return _P4(x1) * _P(x2) + 2.0 * _P2(x1) * _P2(x2) + _P(x1) * _P4(x2)

    def trilap(x1, x2):
        return (_P6(x1) * _P(x2) + 3.0 * _P4(x1) * _P2(x2)
                + 3.0 * _P2(x1) * _P4(x2) + _P(x1) * _P6(x2))

    return ManufacturedSolution(u_star=u_star, lap_u_star=lap, bilap_u_star=bilap, trilap_u_star=trilap)


def example1() -> ProblemSpec:
    ms = example1_manufactured()

    def f(x1, x2, u, v, w):
        return (ms.trilap_u_star(x1, x2)
                - np.sin(w - ms.bilap_u_star(x1, x2))
                - (np.cos(u - ms.u_star(x1, x2)) + 1.0) * np.sin(v - ms.lap_u_star(x1, x2)))

    return ProblemSpec(
        name="example1",
        description="Homogeneous data, u* = x1³(x1-1)³ x2³(x2-1)³",
        f=f,
        exact_solution=ms.u_star,
        manufactured=ms,
    )


def example2() -> ProblemSpec:
    def f(x1, x2, u, v, w):
        # e^(Δu - 1), read literally
        return x1 ** 6 + x2 ** 6 + np.sin(v) * np.sin(w) * np.exp(v - 1.0)

    return ProblemSpec(
        name="example2",
        description="Homogeneous data, f = x1⁶ + x2⁶ + sin(Δu) sin(Δ²u) e^(Δu-1), no exact solution",
        f=f,
    )


def example3() -> ProblemSpec:
    def f(x1, x2, u, v, w):
        return -np.pi ** 3 * np.sin(np.pi * x1) * np.sin(np.pi * x2) + u * v - 0.5 * w

    return ProblemSpec(
        name="example3",
        description="Homogeneous data, f = -π³ sin(πx1) sin(πx2) + uΔu - Δ²u/2, no exact solution",
        f=f,
    )


def example4_manufactured() -> ManufacturedSolution:
    """u* = e^x1 sin(x2) is harmonic, so every Laplacian vanishes."""

    def u_star(x1, x2):
        return np.exp(x1) * np.sin(x2)

    def zero(x1, x2):
        return np.zeros(np.broadcast(x1, x2).shape)

    return ManufacturedSolution(u_star=u_star, lap_u_star=zero, bilap_u_star=zero, trilap_u_star=zero)


def example4() -> ProblemSpec:
    ms = example4_manufactured()

    def f(x1, x2, u, v, w):
        return np.sin(u - ms.u_star(x1, x2)) - np.cos(v) + w + 1.0

    def g2(x1, x2, nu1, nu2):
        # ∇u* · ν
        return nu1 * np.exp(x1) * np.sin(x2) + nu2 * np.exp(x1) * np.cos(x2)

    return ProblemSpec(
        name="example4",
        description="Nonhomogeneous data from u* = e^x1 sin(x2)",
        f=f,
        g1=ms.u_star,
        g2=g2,
        g3=ms.lap_u_star,
        exact_solution=ms.u_star,
        manufactured=ms,
    )


def zero_problem() -> ProblemSpec:
    """f ≡ 0 with homogeneous data; u ≡ 0 is the solution."""

    def f(x1, x2, u, v, w):
        return np.zeros(np.broadcast(x1, x2).shape)

    return ProblemSpec(
        name="zero",
        description="f = 0 with homogeneous data",
        f=f,
        exact_solution=lambda x1, x2: np.zeros(np.broadcast(x1, x2).shape),
    )


EXAMPLES: Dict[str, Callable[[], ProblemSpec]] = {
    "1": example1,
    "2": example2,
    "3": example3,
    "4": example4,
    "zero": zero_problem,
}

# Stopping criterion used for each problem in the published tables.
DEFAULT_STOP: Dict[str, StopCriterion] = {
    "1": StopCriterion.EXACT_ERROR,
    "2": StopCriterion.SUCCESSIVE_DIFF,
    "3": StopCriterion.SUCCESSIVE_DIFF,
    "4": StopCriterion.EXACT_ERROR,
    "zero": StopCriterion.EXACT_ERROR,
}


def get_example(example_id: str) -> ProblemSpec:
    try:
        return EXAMPLES[str(example_id)]()
    except KeyError:
        raise ValueError(f"unknown example '{example_id}', choose from {', '.join(EXAMPLES)}") from None
