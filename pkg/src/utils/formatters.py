"""
Study formatter for exporting convergence tables and solutions.
Supports CSV tables, JSON reports and x1,x2,U solution dumps.
"""

import csv
import json
from datetime import datetime
from typing import List, Optional

import click
import numpy as np

from ..core.grid import GridFunction
from ..core.models import StudyResult, StudyRow

CSV_HEADER = ["N", "K", "error", "order"]
DEFAULT_PRECISION = 6


def format_float(value: float, precision: int = DEFAULT_PRECISION) -> str:
    """Scientific notation with `precision` significant digits."""
    return f"{value:.{precision - 1}e}"


class StudyFormatter:
    """Formatter for exporting study results to different formats."""

    def __init__(self, precision: int = DEFAULT_PRECISION):
        if precision < 1:
            raise ValueError(f"precision must be at least 1, got {precision}")
        self.precision = precision
        self.timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")

    def _default_path(self, result: StudyResult, extension: str) -> str:
        return f"study_{result.problem}_{self.timestamp}.{extension}"

    def export_to_csv(self, result: StudyResult, file_path: Optional[str] = None) -> str:
        """
        Export the study rows as `N,K,error,order`.

        Args:
            result: Study to export
            file_path: Optional file path (if None, generates filename)

        Returns:
            Path to the exported file
        """
        if file_path is None:
            file_path = self._default_path(result, "csv")

        with open(file_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in result.rows:
                writer.writerow([
                    row.N,
                    row.K,
                    format_float(row.error, self.precision),
                    "" if row.order is None else format_float(row.order, self.precision),
                ])

        return file_path

    @staticmethod
    def read_csv(file_path: str) -> List[StudyRow]:
        """Parse a table written by export_to_csv."""
        with open(file_path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header != CSV_HEADER:
                raise ValueError(f"unexpected CSV header {header}, expected {CSV_HEADER}")
            return [
                StudyRow(N=int(N), K=int(K), error=float(error), order=float(order) if order else None)
                for N, K, error, order in reader
            ]

    def export_to_json(self, result: StudyResult, file_path: Optional[str] = None) -> str:
        """
        Export rows and per-grid iteration histories to JSON.

        Args:
            result: Study to export
            file_path: Optional file path (if None, generates filename)

        Returns:
            Path to the exported file
        """
        if file_path is None:
            file_path = self._default_path(result, "json")

        data = result.model_dump(mode="json")
        data["generated_at"] = datetime.now().isoformat()

        with open(file_path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2)

        return file_path

    def dump_solution(self, U: GridFunction, file_path: str) -> str:
        """Write `x1,x2,U` triples for every node, x2 varying fastest."""
        with open(file_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["x1", "x2", "U"])
            for x1, x2, u in solution_table(U):
                writer.writerow([repr(float(x1)), repr(float(x2)), repr(float(u))])
        return file_path

    def print_study_summary(self, result: StudyResult) -> None:
        """Print the convergence table to the console."""
        metric = "E(K)" if result.stop.value == "exact" else "e(K)"
        click.echo(f"\n{'=' * 48}")
        click.echo(f"CONVERGENCE STUDY: {result.problem} ({result.stop.value} stopping)")
        click.echo(f"{'=' * 48}")
        click.echo(f"{'N':>6} {'K':>6} {metric:>14} {'Order':>10}")
        for row in result.rows:
            order = "" if row.order is None else f"{row.order:.4f}"
            click.echo(f"{row.N:>6} {row.K:>6} {format_float(row.error, 5):>14} {order:>10}")
        if result.diverged:
            click.echo("Study aborted: the last solve diverged.")
        click.echo(f"{'=' * 48}\n")


def solution_table(U: GridFunction) -> np.ndarray:
    """(x1, x2, U) rows as an array, in dump_solution order."""
    X1, X2 = U.grid.mesh()
    return np.column_stack([X1.ravel(), X2.ravel(), U.values.ravel()])
