"""
Grid-refinement studies: observed orders of convergence and the study driver
that produces the convergence tables.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import UndefinedOrderError
from .grid import GridFunction, diff_norm, make_grid, restrict_to_coarse
from .models import (
    IterationReport, ProblemSpec, SolverConfig, StopCriterion, StudyResult, StudyRow, Termination
)
from .triharmonic import TriharmonicSolver
from ..problems.benchmarks import get_example

logger = logging.getLogger(__name__)


def compute_order_exact(errors: Sequence[float]) -> List[float]:
    """log2(E_h / E_{h/2}) for each consecutive pair of errors."""
    if len(errors) < 2:
        raise ValueError("need at least two errors to compute an order")
    if any(e <= 0 for e in errors):
        raise ValueError(f"errors must be positive, got {list(errors)}")
    return [math.log2(a / b) for a, b in zip(errors[:-1], errors[1:])]


def compute_order_successive(U_h: GridFunction, U_h2: GridFunction, U_h4: GridFunction) -> float:
    """
    log2(‖U^h - U^{h/2}‖_h / ‖U^{h/2} - U^{h/4}‖_{h/2}), each difference taken
    on the coarser grid's nodes.
    """
    numerator = diff_norm(U_h, restrict_to_coarse(U_h2, U_h.grid))
    denominator = diff_norm(U_h2, restrict_to_coarse(U_h4, U_h2.grid))
    if denominator == 0.0:
        raise UndefinedOrderError("successive solutions on the two finer grids coincide")
    if numerator == 0.0:
        raise UndefinedOrderError("successive solutions on the two coarser grids coincide")
    return math.log2(numerator / denominator)


def validate_n_list(n_list: Sequence[int]) -> List[int]:
    n_list = [int(N) for N in n_list]
    if not n_list:
        raise ValueError("N list is empty")
    if min(n_list) < 5:
        raise ValueError(f"every N must be at least 5, got {n_list}")
    for a, b in zip(n_list[:-1], n_list[1:]):
        if b != 2 * a:
            raise ValueError(f"N list must double at each step, got {n_list}")
    return n_list


def _orders(stop: StopCriterion, reports: List[IterationReport],
            solutions: List[GridFunction]) -> List[Optional[float]]:
    count = len(reports)
    orders: List[Optional[float]] = [None] * count
    if stop == StopCriterion.EXACT_ERROR:
        for i in range(count - 1):
            pair = [reports[i].final_error, reports[i + 1].final_error]
            if all(e > 0 and math.isfinite(e) for e in pair):
                orders[i] = compute_order_exact(pair)[0]
    else:
        for i in range(count - 2):
            try:
                orders[i] = compute_order_successive(solutions[i], solutions[i + 1], solutions[i + 2])
            except UndefinedOrderError as exc:
                logger.info("order at N=%d undefined: %s", solutions[i].grid.m, exc)
    return orders


def run_convergence_study(problem: Union[str, ProblemSpec], n_list: Sequence[int],
                          config: Optional[SolverConfig] = None, parallel: bool = False,
                          l1: float = 1.0, l2: float = 1.0
                          ) -> Tuple[StudyResult, Dict[int, GridFunction]]:
    """
    Solve on each grid of n_list and tabulate K, the error metric and the
    observed order.

    Args:
        problem: Example id ("1".."4", "zero") or a ProblemSpec
        n_list: Doubling sequence of intervals per side
        config: Iteration settings shared by every solve
        parallel: Solve the grids concurrently
        l1, l2: Rectangle edge lengths

    Returns:
        The study result (cut short after the first diverged solve) and the
        final U of every completed grid, keyed by N
    """
    if isinstance(problem, str):
        problem = get_example(problem)
    config = config or SolverConfig()
    n_list = validate_n_list(n_list)

    def run(N: int):
        logger.info("solving '%s' with N=%d", problem.name, N)
        grid = make_grid(l1, l2, N, N)
        U, _, _, report = TriharmonicSolver(problem, grid, config).solve()
        return U, report

    if parallel:
        with ThreadPoolExecutor(max_workers=len(n_list)) as pool:
            outcomes = list(pool.map(run, n_list))
    else:
        outcomes = []
        for N in n_list:
            outcomes.append(run(N))
            if outcomes[-1][1].termination == Termination.DIVERGED:
                break

    diverged = False
    completed: List[Tuple[int, GridFunction, IterationReport]] = []
    for N, (U, report) in zip(n_list, outcomes):
        completed.append((N, U, report))
        if report.termination == Termination.DIVERGED:
            logger.warning("study of '%s' aborted: N=%d diverged", problem.name, N)
            diverged = True
            break

    reports = [r for _, _, r in completed]
    solutions = [U for _, U, _ in completed]
    orders = _orders(config.stop, reports, solutions)
    rows = [
        StudyRow(N=N, K=report.iterations, error=report.final_error, order=order)
        for (N, _, report), order in zip(completed, orders)
    ]
    result = StudyResult(problem=problem.name, stop=config.stop, rows=rows, reports=reports, diverged=diverged)
    return result, {N: U for N, U, _ in completed}
