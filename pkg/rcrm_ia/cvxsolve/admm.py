"""Operator-splitting (ADMM) solver for :class:`NuclearLmiProblem`.

The problem is split as Z_k = J_k(theta), W_k = S_k(theta). Each iteration
solves a least-squares problem in theta with the fixed stacked operator,
shrinks the singular values of every Z_k and projects every W_k onto
{W = W^H, lambda_min(W) >= eps}. Scaled duals, over-relaxation and
residual-balancing penalty updates follow the usual ADMM recipe. The
returned point is polished so that the ranks the thresholding found are
exact rather than left at the solver tolerance.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from rcrm_ia.cvxsolve.problem import NuclearLmiProblem, from_real, stacked_operator, to_real
from rcrm_ia.numerics import (
    eigh_hermitian_part,
    hermitian_part,
    min_eig_herm,
    orth_complement,
    pinv,
    svd,
    svt,
)
from rcrm_ia.schemas.solver import SolveReport, SolverOptions, SolveStatus

logger = logging.getLogger(__name__)

RHO_BALANCE = 10.0
RHO_FACTOR = 2.0
RHO_MIN, RHO_MAX = 1e-6, 1e6
POLISH_ATOL = 1e-9


def project_lmi(W: np.ndarray, eps: float) -> np.ndarray:
    """Nearest Hermitian matrix with every eigenvalue at least ``eps``."""
    w, Q = eigh_hermitian_part(W)
    return (Q * np.maximum(w, eps)) @ Q.conj().T


class _Splitting:
    """Stacked operator of a problem and the block-wise proximal step."""

    def __init__(self, problem: NuclearLmiProblem):
        self.problem = problem
        self.A, self.b, self.slices = stacked_operator(problem)
        self.n_nuclear = len(problem.nuclear_terms)
        self.terms = problem.nuclear_terms + problem.lmi_terms
        self.A_pinv = pinv(self.A) if self.A.size else np.zeros((self.A.shape[1], 0))

    def forward(self, theta: np.ndarray) -> np.ndarray:
        return self.A @ theta + self.b

    def prox(self, v: np.ndarray, rho: float) -> np.ndarray:
        out = np.empty_like(v)
        for i, (sl, term) in enumerate(zip(self.slices, self.terms)):
            X = from_real(v[sl], term.shape)
            if i < self.n_nuclear:
                X, _ = svt(X, 1.0 / rho)
            else:
                X = project_lmi(X, self.problem.eps)
            out[sl] = to_real(X)
        return out


def _real_operator(fn, shape) -> np.ndarray:
    """Real matrix of a real-linear map ``fn`` on complex matrices of ``shape``."""
    n = 2 * shape[0] * shape[1]
    return np.stack([to_real(fn(from_real(e, shape))) for e in np.eye(n)], axis=1)


def polish_ranks(problem: NuclearLmiProblem, theta: np.ndarray, rtol: float) -> np.ndarray:
    """Remove the residual singular values an approximate solve leaves behind.

    Every nuclear term J(theta) is split at its numerical rank r, counting
    singular values above ``rtol * max(1, sigma_1)``. The minimum-norm change
    of theta that puts each J(theta) inside the span of its r leading left
    singular vectors, and keeps every LMI term Hermitian, is applied. The
    input comes back unchanged when no term is rank deficient or the
    conditions cannot be met together.
    """
    blocks, rhs = [], []
    for t in problem.nuclear_terms:
        X = t.apply(theta)
        if X.size == 0:
            continue
        left, s, _ = svd(X)
        r = int(np.count_nonzero(s > rtol * max(1.0, s[0])))
        if r == X.shape[0]:
            continue
        Qp = orth_complement(left[:, :r])
        L = _real_operator(lambda Y, Q=Qp: Q.conj().T @ Y, t.shape)
        blocks.append(L @ t.G)
        rhs.append(-(L @ t.offset))
    if not blocks:
        return theta
    for t in problem.lmi_terms:
        L = _real_operator(lambda Y: Y - Y.conj().T, t.shape)
        blocks.append(L @ t.G)
        rhs.append(-(L @ t.offset))
    C, c = np.vstack(blocks), np.concatenate(rhs)
    polished = theta - pinv(C) @ (C @ theta - c)
    if np.linalg.norm(C @ polished - c) > POLISH_ATOL * max(1.0, float(np.linalg.norm(theta))):
        logger.debug("%s: rank polish left a residual, keeping the solver point", problem.name)
        return theta
    return polished


def _infeasible_report(problem: NuclearLmiProblem, theta: np.ndarray, rho: float) -> SolveReport:
    return SolveReport(objective=problem.objective(theta),
                       primal_feasibility=max(problem.lmi_violation(theta), 0.0),
                       iterations=0, status=SolveStatus.INFEASIBLE, rho=rho)


def solve(problem: NuclearLmiProblem, x0: Optional[Sequence[np.ndarray]] = None,
          options: Optional[SolverOptions] = None):
    """Minimize the problem's objective from the optional warm start ``x0``.

    Returns:
        ``(theta, report)``. On ``infeasible`` status ``theta`` is ``None``;
        on ``max_iter`` it is the best iterate seen at a convergence check.
    """
    opts = options or SolverOptions()
    rho = opts.rho
    theta = problem.pack(x0) if x0 is not None else np.zeros(problem.layout.n_real)

    # An LMI term that does not depend on the variables cannot be moved.
    for t in problem.lmi_terms:
        if t.is_zero and problem.eps - min_eig_herm(hermitian_part(t.apply(theta))) > opts.infeasible_tol:
            report = _infeasible_report(problem, theta, rho)
            logger.debug("%s: constant LMI term violates the bound", problem.name)
            return None, report

    split = _Splitting(problem)
    if split.A.shape[0] == 0:
        return theta, SolveReport(objective=0.0, primal_feasibility=0.0, iterations=0,
                                  status=SolveStatus.OPTIMAL, rho=rho)

    # threshold 0: Z = J(theta0), W = projected S(theta0)
    z = split.prox(split.forward(theta), np.inf)
    y = np.zeros_like(z)
    alpha = opts.over_relaxation

    best = None
    prev_obj = None
    r_norm = s_norm = np.inf
    status = SolveStatus.MAX_ITER
    it = 0
    for it in range(1, opts.max_iter + 1):
        theta = split.A_pinv @ (z - y - split.b)
        Ax = split.forward(theta)
        Ax_hat = alpha * Ax + (1.0 - alpha) * z
        z_old = z
        z = split.prox(Ax_hat + y, rho)
        y = y + Ax_hat - z

        if it % opts.check_every and it != opts.max_iter:
            continue

        r_norm = float(np.linalg.norm(Ax - z))
        s_norm = float(rho * np.linalg.norm(split.A.T @ (z - z_old)))
        obj = problem.objective(theta)
        viol = problem.lmi_violation(theta)
        key = (viol > opts.infeasible_tol, obj if viol <= opts.infeasible_tol else viol)
        if best is None or key < best[0]:
            best = (key, theta.copy(), r_norm, s_norm)

        obj_stalled = prev_obj is not None and abs(obj - prev_obj) <= opts.objective_rtol * max(1.0, abs(obj))
        prev_obj = obj
        if r_norm <= opts.primal_tol and s_norm <= opts.dual_tol and obj_stalled:
            status = SolveStatus.OPTIMAL
            break

        if opts.adaptive_rho:
            if r_norm > RHO_BALANCE * s_norm and rho < RHO_MAX:
                rho *= RHO_FACTOR
                y /= RHO_FACTOR
            elif s_norm > RHO_BALANCE * r_norm and rho > RHO_MIN:
                rho /= RHO_FACTOR
                y *= RHO_FACTOR

    if status != SolveStatus.OPTIMAL:
        _, theta, r_norm, s_norm = best
        if r_norm > opts.infeasible_tol and problem.lmi_violation(theta) > opts.infeasible_tol:
            status = SolveStatus.INFEASIBLE

    if status != SolveStatus.INFEASIBLE and opts.polish_rank:
        polished = polish_ranks(problem, theta, opts.rank_rtol)
        if problem.lmi_violation(polished) <= max(problem.lmi_violation(theta), opts.primal_tol):
            theta = polished

    report = SolveReport(
        objective=problem.objective(theta),
        primal_feasibility=max(r_norm, problem.lmi_violation(theta), 0.0),
        iterations=it,
        status=status,
        dual_residual=s_norm,
        rho=rho,
    )
    if status == SolveStatus.INFEASIBLE:
        return None, report
    return theta, report
