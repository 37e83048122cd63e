"""Pydantic models for the convex subproblem solver."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class SolveStatus(str, Enum):
    """Termination status of a subproblem solve."""
    OPTIMAL = "optimal"
    MAX_ITER = "max_iter"
    INFEASIBLE = "infeasible"


_SEVERITY = {SolveStatus.OPTIMAL: 0, SolveStatus.MAX_ITER: 1, SolveStatus.INFEASIBLE: 2}


def worst_status(*statuses: SolveStatus) -> SolveStatus:
    return max(statuses, key=_SEVERITY.__getitem__)


class SolverOptions(BaseModel):
    """Stopping rules and step parameters of the operator-splitting solver."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iter: int = Field(50_000, ge=1, description="Iteration limit")
    primal_tol: float = Field(1e-6, gt=0, description="Max primal residual at termination")
    dual_tol: float = Field(1e-6, gt=0, description="Max scaled dual residual at termination")
    objective_rtol: float = Field(1e-7, gt=0, description="Relative objective change at termination")
    rho: float = Field(1.0, gt=0, description="Initial penalty parameter")
    adaptive_rho: bool = Field(True, description="Residual-balancing penalty updates")
    over_relaxation: float = Field(1.6, gt=0, lt=2, description="Relaxation factor alpha")
    infeasible_tol: float = Field(1e-3, gt=0,
                                  description="Primal residual above which a stalled run is infeasible")
    check_every: int = Field(10, ge=1, description="Iterations between convergence checks")
    polish_rank: bool = Field(True, description="Zero the residual singular values of the returned point")
    rank_rtol: float = Field(1e-5, gt=0, lt=1,
                             description="Relative singular-value cutoff used by the rank polish")


class SolveReport(BaseModel):
    """Outcome of one subproblem solve."""

    objective: float = Field(..., description="Sum of nuclear norms at the returned point")
    primal_feasibility: float = Field(..., ge=0, description="Max constraint violation")
    iterations: int = Field(..., ge=0)
    status: SolveStatus
    dual_residual: float = Field(0.0, ge=0)
    rho: float = Field(1.0, gt=0, description="Final penalty parameter")

    @classmethod
    def merge(cls, reports) -> "SolveReport":
        """Combine the reports of independent per-receiver solves."""
        reports = list(reports)
        return cls(
            objective=sum(r.objective for r in reports),
            primal_feasibility=max(r.primal_feasibility for r in reports),
            iterations=max(r.iterations for r in reports),
            status=worst_status(*(r.status for r in reports)),
            dual_residual=max(r.dual_residual for r in reports),
            rho=reports[-1].rho,
        )
