"""
Command-line interface for the nonlinear triharmonic solver.
"""

import logging
import sys
from typing import List, Optional

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from .core.errors import GridError
from .core.grid import make_grid
from .core.models import SolverConfig, StopCriterion, Termination
from .core.study import run_convergence_study, validate_n_list
from .core.triharmonic import TriharmonicSolver
from .problems.benchmarks import DEFAULT_STOP, EXAMPLES, get_example
from .problems.manufactured import discrepancy_ratios, verify_manufactured
from .utils.formatters import DEFAULT_PRECISION, StudyFormatter, format_float

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DIVERGED = 2
EXIT_INVALID = 3

EXAMPLE_CHOICES = click.Choice(list(EXAMPLES))
STOP_CHOICES = click.Choice([s.value for s in StopCriterion])


def _parse_n_list(ctx, param, value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return validate_n_list([int(part) for part in value.split(",") if part.strip()])
    except ValueError as exc:
        raise click.BadParameter(str(exc), ctx=ctx, param=param)


def _build_config(example: str, tau: float, stop: Optional[str], tol: float, max_iter: int) -> SolverConfig:
    criterion = StopCriterion(stop) if stop else DEFAULT_STOP[example]
    if criterion == StopCriterion.EXACT_ERROR and get_example(example).exact_solution is None:
        raise click.UsageError(f"example {example} has no exact solution; use --stop successive")
    try:
        return SolverConfig(tau=tau, stop=criterion, tol=tol, max_iter=max_iter)
    except ValidationError as exc:
        raise click.UsageError(f"invalid solver settings: {exc}")


def solver_options(fn):
    """Options shared by the solve and study commands."""
    fn = click.option('--max-iter', default=10000, show_default=True, help='Maximum outer iterations')(fn)
    fn = click.option('--tol', default=1e-6, show_default=True, help='Tolerance of the successive criterion')(fn)
    fn = click.option('--stop', type=STOP_CHOICES, help='Stopping criterion (default depends on the example)')(fn)
    fn = click.option('--tau', default=150.0, show_default=True, help='Boundary relaxation parameter')(fn)
    fn = click.option('--example', '-e', type=EXAMPLE_CHOICES, required=True, help='Built-in problem')(fn)
    return fn


@click.group(context_settings={"auto_envvar_prefix": "TRISOLVE"})
@click.version_option(version="1.0.0")
@click.option('--verbose', '-v', count=True, help='Verbose output (-vv for per-iteration logs)')
def cli(verbose: int):
    """Nonlinear triharmonic solver - fixed-point iteration over compact Poisson solves."""
    load_dotenv()
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")


@cli.command()
@solver_options
@click.option('--n', 'N', type=click.IntRange(min=5), required=True, help='Grid intervals per side')
@click.option('--dump-solution', type=click.Path(dir_okay=False), help='Write x1,x2,U triples to this file')
def solve(example: str, tau: float, stop: Optional[str], tol: float, max_iter: int,
          N: int, dump_solution: Optional[str]):
    """Run a single solve and print K and the final error metric."""
    ctx = click.get_current_context()
    config = _build_config(example, tau, stop, tol, max_iter)
    problem = get_example(example)

    try:
        grid = make_grid(1.0, 1.0, N, N)
    except GridError as exc:
        raise click.UsageError(str(exc))

    U, _, _, report = TriharmonicSolver(problem, grid, config).solve()

    metric = "E(K)" if config.stop == StopCriterion.EXACT_ERROR else "e(K)"
    click.echo(f"N={N} K={report.iterations} {metric}={format_float(report.final_error, 5)} "
               f"termination={report.termination.value} time={report.elapsed:.2f}s")

    if dump_solution:
        StudyFormatter().dump_solution(U, dump_solution)
        click.echo(f"Solution written to {dump_solution}")

    if report.termination == Termination.DIVERGED:
        ctx.exit(EXIT_DIVERGED)


@cli.command()
@solver_options
@click.option('--n-list', callback=_parse_n_list, default="8,16,32,64", show_default=True,
              help='Comma-separated doubling grid sizes')
@click.option('--out', '-o', type=click.Path(dir_okay=False), help='CSV output path')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), help='Also write a JSON report')
@click.option('--dump-solution', type=click.Path(dir_okay=False), help='Write x1,x2,U of the finest grid')
@click.option('--precision', type=click.IntRange(min=1, max=17), default=DEFAULT_PRECISION,
              show_default=True, help='Significant digits in the CSV')
@click.option('--parallel', is_flag=True, help='Solve the grid sizes concurrently')
def study(example: str, tau: float, stop: Optional[str], tol: float, max_iter: int,
          n_list: List[int], out: Optional[str], json_path: Optional[str],
          dump_solution: Optional[str], precision: int, parallel: bool):
    """Run a convergence study and write the table as CSV."""
    ctx = click.get_current_context()
    config = _build_config(example, tau, stop, tol, max_iter)
    formatter = StudyFormatter(precision=precision)

    result, solutions = run_convergence_study(example, n_list, config, parallel=parallel)

    formatter.print_study_summary(result)
    click.echo(f"Exported to {formatter.export_to_csv(result, out)}")
    if json_path:
        click.echo(f"Exported to {formatter.export_to_json(result, json_path)}")
    if dump_solution and solutions:
        finest = max(solutions)
        formatter.dump_solution(solutions[finest], dump_solution)
        click.echo(f"Solution for N={finest} written to {dump_solution}")

    if result.diverged:
        click.echo("Error: a solve diverged; the table is partial.", err=True)
        ctx.exit(EXIT_DIVERGED)


@cli.command()
@click.option('--example', '-e', type=click.Choice(["1", "4"]), required=True,
              help='Example with a manufactured solution')
@click.option('--n-list', callback=_parse_n_list, default="16,32,64", show_default=True,
              help='Comma-separated doubling grid sizes')
def verify(example: str, n_list: List[int]):
    """Check the Laplacian chain of a manufactured solution by finite differences."""
    ms = get_example(example).manufactured
    reports = [verify_manufactured(ms, make_grid(1.0, 1.0, N, N)) for N in n_list]
    links = ["u*->Δu*", "Δu*->Δ²u*", "Δ²u*->Δ³u*"]
    for i, report in enumerate(reports):
        line = "  ".join(f"{link}: {format_float(d, 4)}" for link, d in zip(links, report.discrepancies))
        click.echo(f"N={report.N:>5}  {line}")
        if i > 0:
            ratios = discrepancy_ratios(reports[i - 1], report)
            click.echo("        ratios  " + "  ".join(f"{r:.3f}" for r in ratios))


@cli.command()
def examples():
    """Show the built-in problems and usage examples."""
    click.echo("\nBuilt-in problems (unit square)")
    click.echo("===============================")
    for key, factory in EXAMPLES.items():
        problem = factory()
        click.echo(f"{key:>5}: {problem.description} [default stop: {DEFAULT_STOP[key].value}]")
    click.echo("""
Usage examples
==============

1. Reproduce the Example 1 table:
   trisolve study --example 1 --n-list 8,16,32,64,128 --out table1.csv

2. Example 3 with the successive-difference criterion:
   trisolve study --example 3 --n-list 8,16,32,64,128,256,512 --tol 1e-6 --out table3.csv

3. Single solve with a solution dump for plotting:
   trisolve solve --example 3 --n 64 --dump-solution u64.csv

4. Check a manufactured Laplacian chain:
   trisolve verify --example 1 --n-list 16,32,64

Every option may be defaulted from TRISOLVE_<COMMAND>_<OPTION>
environment variables or a .env file.
""")


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and map failures to exit statuses."""
    try:
        rv = cli.main(args=argv, prog_name="trisolve", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_INVALID
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_FAILURE
    except Exception as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_FAILURE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
