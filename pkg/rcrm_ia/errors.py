"""Exception hierarchy shared by every layer of the package."""

from typing import Optional, Tuple


class RcrmError(Exception):
    """Root of all errors raised by rcrm_ia."""
    pass


class NumericalError(RcrmError):
    """A factorization (SVD or eigensolver) failed to converge."""

    def __init__(self, message: str, shape: Optional[Tuple[int, ...]] = None):
        self.shape = shape
        if shape is not None:
            message = f"{message} (matrix shape {shape[0]}x{shape[1]})"
        super().__init__(message)


class ContractViolation(RcrmError, ValueError):
    """Input does not satisfy an operation's contract (shape, symmetry, norms)."""
    pass


class DegenerateInput(RcrmError, ValueError):
    """Rank-deficient input where full column rank is required."""

    def __init__(self, message: str, user: Optional[int] = None):
        self.user = user
        if user is not None:
            message = f"user {user}: {message}"
        super().__init__(message)


class PreconditionViolation(RcrmError, ValueError):
    """A documented precondition of an operation does not hold."""
    pass


class InvalidConfig(RcrmError, ValueError):
    """A system or experiment configuration failed validation."""
    pass


class SolverInfeasible(RcrmError):
    """An alternating run was aborted because a subproblem was infeasible."""

    def __init__(self, round_index: int, report):
        self.round_index = round_index
        self.report = report
        super().__init__(
            f"subproblem infeasible in round {round_index}: status={report.status.value}, "
            f"primal_feasibility={report.primal_feasibility:.3e}"
        )
