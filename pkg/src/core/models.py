"""
Data models and schemas for the triharmonic solver.
"""

from enum import Enum
from typing import Any, Callable, List, Optional

from pydantic import BaseModel, Field, model_validator


# Vectorised callables over numpy arrays of node coordinates / values.
Nonlinearity = Callable[..., Any]       # f(x1, x2, u, v, w)
BoundaryData = Callable[..., Any]       # g1(x1, x2), g3(x1, x2)
NormalData = Callable[..., Any]         # g2(x1, x2, nu1, nu2)
ScalarField = Callable[..., Any]        # u*(x1, x2)


class StopCriterion(str, Enum):
    """Stopping rules for the outer iteration."""
    EXACT_ERROR = "exact"
    SUCCESSIVE_DIFF = "successive"


class Termination(str, Enum):
    """Why the outer iteration stopped."""
    CONVERGED = "converged"
    MAX_ITERATIONS = "max-iterations"
    DIVERGED = "diverged"


class ManufacturedSolution(BaseModel):
    """An exact solution together with its Laplacian chain."""
    u_star: ScalarField = Field(..., description="u*(x1, x2)")
    lap_u_star: ScalarField = Field(..., description="Laplacian of u*")
    bilap_u_star: ScalarField = Field(..., description="Second Laplacian of u*")
    trilap_u_star: ScalarField = Field(..., description="Third Laplacian of u*")

    def chain(self) -> List[ScalarField]:
        return [self.u_star, self.lap_u_star, self.bilap_u_star, self.trilap_u_star]


class ProblemSpec(BaseModel):
    """
    Nonlinear triharmonic problem Δ³u = f(x, u, Δu, Δ²u) with Dirichlet data.

    Missing boundary data means the homogeneous condition. g2 is the outward
    normal derivative and receives the outward unit normal of each node.
    """
    name: str = Field("user", description="Short identifier of the problem")
    description: Optional[str] = Field(None, description="Human-readable description")
    f: Nonlinearity = Field(..., description="Nonlinearity f(x1, x2, u, v, w)")
    g1: Optional[BoundaryData] = Field(None, description="Dirichlet value of u on the boundary")
    g2: Optional[NormalData] = Field(None, description="Outward normal derivative of u on the boundary")
    g3: Optional[BoundaryData] = Field(None, description="Trace of Δu on the boundary")
    exact_solution: Optional[ScalarField] = Field(None, description="Exact solution u*, if known")
    manufactured: Optional[ManufacturedSolution] = Field(None, description="Laplacian chain of u*, if known")

    @property
    def homogeneous(self) -> bool:
        return self.g1 is None and self.g2 is None and self.g3 is None


class SolverConfig(BaseModel):
    """Settings of the outer fixed-point iteration."""
    tau: float = Field(150.0, gt=0, description="Boundary relaxation parameter")
    stop: StopCriterion = Field(StopCriterion.EXACT_ERROR, description="Active stopping criterion")
    tol: float = Field(1e-6, gt=0, description="Tolerance of the successive-difference criterion")
    max_iter: int = Field(10000, ge=1, description="Maximum number of outer iterations")
    divergence_factor: float = Field(1e6, gt=1, description="Abort when the metric exceeds this multiple of its minimum")


class IterationReport(BaseModel):
    """Outcome of one outer iteration run."""
    iterations: int = Field(..., ge=0, description="Number of outer iterations K")
    history: List[float] = Field(default_factory=list, description="Error metric after each iteration")
    termination: Termination = Field(..., description="Termination reason")
    final_error: float = Field(..., description="E(K) under exact stopping, e(K) under successive stopping")
    stop: StopCriterion = Field(..., description="Criterion the metric belongs to")
    elapsed: float = Field(0.0, ge=0, description="Wall time in seconds")

    @model_validator(mode="after")
    def _history_matches_iterations(self) -> "IterationReport":
        if len(self.history) != self.iterations:
            raise ValueError("history length must equal the number of iterations")
        return self


class StudyRow(BaseModel):
    """One line of a convergence table."""
    N: int = Field(..., ge=5, description="Grid intervals per side")
    K: int = Field(..., ge=0, description="Outer iterations performed")
    error: float = Field(..., description="E(K) or e(K)")
    order: Optional[float] = Field(None, description="Observed order, absent when undefined")


class StudyResult(BaseModel):
    """Rows of a convergence study together with the underlying reports."""
    problem: str = Field(..., description="Problem identifier")
    stop: StopCriterion = Field(..., description="Stopping criterion of every solve")
    rows: List[StudyRow] = Field(default_factory=list)
    reports: List[IterationReport] = Field(default_factory=list)
    diverged: bool = Field(False, description="True if some solve diverged and the study was cut short")


class ManufacturedReport(BaseModel):
    """Discrete Laplacian discrepancies along a manufactured chain."""
    N: int = Field(..., description="Grid intervals per side (m)")
    discrepancies: List[float] = Field(..., description="max |Δ_h c_k - c_{k+1}| for k = 0, 1, 2")
