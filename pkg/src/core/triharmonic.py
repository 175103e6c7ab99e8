"""
Outer fixed-point iteration for the nonlinear triharmonic problem.

Coordinates the three compact Poisson solves of each step with the update of
the nonlinear term Φ in the domain and the boundary trace G of Δ²u.
"""

import logging
import math
import time
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..numerics.fast_poisson import poisson_step
from ..numerics.stencils import normal_derivative
from .errors import NonFiniteValueError
from .grid import Grid, GridFunction, BoundaryFunction, diff_norm
from .models import (
    IterationReport, ProblemSpec, SolverConfig, StopCriterion, Termination
)

logger = logging.getLogger(__name__)


class IterationState(BaseModel):
    """Z_k = (Φ_k, G_k) together with the latest solves U, V, W."""
    model_config = ConfigDict(frozen=True)

    Phi: GridFunction
    G: BoundaryFunction
    U: GridFunction
    V: GridFunction
    W: GridFunction


IterationCallback = Callable[[int, IterationState, float], None]


class TriharmonicSolver:
    """Runs the discrete iterative process for one problem on one grid."""

    def __init__(self, problem: ProblemSpec, grid: Grid, config: Optional[SolverConfig] = None):
        """
        Sample the boundary data and exact solution once for the grid.

        Args:
            problem: Problem definition
            grid: Computational grid
            config: Iteration settings (defaults to SolverConfig())
        """
        self.problem = problem
        self.grid = grid
        self.config = config or SolverConfig()
        self._mesh = grid.mesh()

        self.g1 = _boundary_samples(grid, problem.g1)
        self.g3 = _boundary_samples(grid, problem.g3)
        if problem.g2 is None:
            self.g2 = BoundaryFunction.zeros(grid)
        else:
            self.g2 = BoundaryFunction.from_normal_callable(grid, problem.g2)

        self.exact = None
        if problem.exact_solution is not None:
            self.exact = GridFunction.from_callable(grid, problem.exact_solution)

    def evaluate_f(self, U: np.ndarray, V: np.ndarray, W: np.ndarray) -> GridFunction:
        """f(x, U, V, W) at every closed-grid node."""
        X1, X2 = self._mesh
        with np.errstate(all="ignore"):
            values = np.asarray(self.problem.f(X1, X2, U, V, W), dtype=float)
        values = np.broadcast_to(values, self.grid.shape).copy()
        finite = np.isfinite(values)
        if not finite.all():
            i, j = np.argwhere(~finite)[0]
            raise NonFiniteValueError(f"nonlinearity of problem '{self.problem.name}' is not finite", (int(i), int(j)))
        return GridFunction(grid=self.grid, values=values)

    def initialize(self) -> IterationState:
        """Φ_0 = f(x, 0, 0, 0) on the closed grid, G_0 = 0."""
        zero = np.zeros(self.grid.shape)
        Phi = self.evaluate_f(zero, zero, zero)
        Z = GridFunction.zeros(self.grid)
        return IterationState(Phi=Phi, G=BoundaryFunction.zeros(self.grid), U=Z, V=Z, W=Z)

    def iterate_once(self, state: IterationState, tau: Optional[float] = None) -> IterationState:
        """
        One step: three inner solves, then Φ and G from those same solves.

        Args:
            state: Current (Φ_k, G_k)
            tau: Boundary relaxation parameter (defaults to config.tau)

        Returns:
            State holding Φ_{k+1}, G_{k+1} and the k-th solves U, V, W
        """
        tau = self.config.tau if tau is None else tau

        W = poisson_step(state.Phi, state.G)
        V = poisson_step(W, self.g3)
        U = poisson_step(V, self.g1)

        # U, V, W already carry g1, g3 and G_k on the boundary.
        Phi = self.evaluate_f(U.values, V.values, W.values)
        # D_ν is outward here; adding the mismatch is the contracting direction.
        G = state.G + tau * (normal_derivative(U) - self.g2)

        return IterationState(Phi=Phi, G=G, U=U, V=V, W=W)

    def _metric(self, previous: IterationState, current: IterationState) -> float:
        if self.config.stop == StopCriterion.EXACT_ERROR:
            return diff_norm(self.exact, current.U)
        return diff_norm(current.U, previous.U)

    def threshold(self) -> float:
        if self.config.stop == StopCriterion.EXACT_ERROR:
            return self.grid.h1 ** 4 + self.grid.h2 ** 4
        return self.config.tol

    def solve(self, callback: Optional[IterationCallback] = None
              ) -> Tuple[GridFunction, GridFunction, GridFunction, IterationReport]:
        """
        Iterate until the active criterion holds, max_iter is reached or the
        metric diverges.

        Returns:
            U, V, W (approximations of u, Δu, Δ²u) and the iteration report
        """
        config = self.config
        if config.stop == StopCriterion.EXACT_ERROR and self.exact is None:
            raise ValueError(f"problem '{self.problem.name}' has no exact solution; use the successive criterion")

        start_time = time.time()
        threshold = self.threshold()
        state = self.initialize()
        history = []
        best = math.inf
        termination = Termination.MAX_ITERATIONS

        for k in range(1, config.max_iter + 1):
            try:
                new_state = self.iterate_once(state)
            except NonFiniteValueError as exc:
                logger.warning("iteration %d of '%s' produced non-finite values: %s", k, self.problem.name, exc)
                history.append(math.inf)
                termination = Termination.DIVERGED
                break

            metric = self._metric(state, new_state)
            history.append(metric)
            state = new_state
            logger.debug("N=%d k=%d %s=%.4e", self.grid.m, k, config.stop.value, metric)

            if callback is not None:
                callback(k, state, metric)

            if metric <= threshold:
                termination = Termination.CONVERGED
                break
            if not math.isfinite(metric) or metric > config.divergence_factor * best:
                logger.warning("iteration of '%s' diverged at k=%d (metric %.3e, best %.3e)",
                               self.problem.name, k, metric, best)
                termination = Termination.DIVERGED
                break
            best = min(best, metric)

        report = IterationReport(
            iterations=len(history),
            history=history,
            termination=termination,
            final_error=history[-1],
            stop=config.stop,
            elapsed=time.time() - start_time,
        )
        logger.info("'%s' on %dx%d: %s after K=%d, %s=%.4e", self.problem.name, self.grid.m, self.grid.n,
                    termination.value, report.iterations, config.stop.value, report.final_error)
        return state.U, state.V, state.W, report


def _boundary_samples(grid: Grid, g) -> BoundaryFunction:
    if g is None:
        return BoundaryFunction.zeros(grid)
    return BoundaryFunction.from_callable(grid, g)


def initialize(problem: ProblemSpec, grid: Grid) -> IterationState:
    return TriharmonicSolver(problem, grid).initialize()


def iterate_once(state: IterationState, problem: ProblemSpec, grid: Grid, tau: float) -> IterationState:
    return TriharmonicSolver(problem, grid, SolverConfig(tau=tau)).iterate_once(state)


def solve(problem: ProblemSpec, grid: Grid, config: Optional[SolverConfig] = None,
          callback: Optional[IterationCallback] = None
          ) -> Tuple[GridFunction, GridFunction, GridFunction, IterationReport]:
    return TriharmonicSolver(problem, grid, config).solve(callback)
