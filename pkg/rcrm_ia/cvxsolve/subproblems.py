"""The precoder and zero-forcer subproblems of the alternating heuristic.

With the zero-forcers fixed, the precoder step minimizes the sum of nuclear
norms of the interference matrices J_k over all V_l, subject to every signal
matrix S_k being Hermitian with eigenvalues at least eps. The zero-forcer
step swaps the roles; since J_k and S_k depend on U_k only, it splits into K
independent per-receiver problems.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from rcrm_ia.core.links import interference_blocks
from rcrm_ia.cvxsolve.admm import solve
from rcrm_ia.cvxsolve.problem import NuclearLmiProblem, VariableLayout, compile_affine
from rcrm_ia.errors import ContractViolation
from rcrm_ia.model.channels import ChannelSet
from rcrm_ia.numerics import as_complex_matrix
from rcrm_ia.schemas.solver import SolveReport, SolverOptions
from rcrm_ia.schemas.system import CellularConfig, SystemConfig
from rcrm_ia.utils.logging_utils import log_solver_report

logger = logging.getLogger(__name__)


def _check_filters(mats: Sequence[np.ndarray], K: int, rows: int, d: int, what: str) -> List[np.ndarray]:
    if len(mats) != K:
        raise ContractViolation(f"expected {K} {what}, got {len(mats)}")
    out = []
    for k, M in enumerate(mats):
        M = as_complex_matrix(M)
        if M.shape != (rows, d):
            raise ContractViolation(f"{what}[{k}] has shape {M.shape}, expected {(rows, d)}")
        out.append(M)
    return out


def cellular_masks(cfg: CellularConfig) -> List[np.ndarray]:
    """Free entries of each cellular precoder: column u lives on the rows of user u."""
    mask = np.zeros((cfg.M_t, cfg.d), dtype=bool)
    for u in range(cfg.d):
        mask[list(cfg.user_rows(u)), u] = True
    return [mask.copy() for _ in range(cfg.K)]


def build_precoder_problem(ch: ChannelSet, U_fixed: Sequence[np.ndarray], eps: float,
                           masks: Optional[Sequence[np.ndarray]] = None) -> NuclearLmiProblem:
    """Precoder subproblem: variables V_1..V_K with the zero-forcers fixed."""
    K = ch.K
    d = as_complex_matrix(U_fixed[0]).shape[1]
    U = _check_filters(U_fixed, K, ch.M_r, d, "zero-forcers")
    shapes = [(ch.M_t, d)] * K
    layout = (VariableLayout.dense(shapes) if masks is None
              else VariableLayout(shapes=tuple(shapes), masks=tuple(np.asarray(m, dtype=bool) for m in masks)))

    def terms(V):
        J = [np.hstack(interference_blocks(ch, U[k], V, k)) for k in range(K)] if K > 1 else []
        S = [U[k].conj().T @ ch.channel(k, k) @ V[k] for k in range(K)]
        return J + S

    maps = compile_affine(terms, layout)
    n_j = K if K > 1 else 0
    return NuclearLmiProblem(layout=layout, nuclear_terms=tuple(maps[:n_j]),
                             lmi_terms=tuple(maps[n_j:]), eps=eps, name="A_V")


def build_zeroforcer_problem(ch: ChannelSet, V_fixed: Sequence[np.ndarray], eps: float,
                             k: int) -> NuclearLmiProblem:
    """Zero-forcer subproblem of receiver ``k``: the single variable U_k."""
    K = ch.K
    d = as_complex_matrix(V_fixed[0]).shape[1]
    V = _check_filters(V_fixed, K, ch.M_t, d, "precoders")
    layout = VariableLayout.dense([(ch.M_r, d)])

    def terms(X):
        U_k = X[0]
        S = U_k.conj().T @ ch.channel(k, k) @ V[k]
        if K == 1:
            return [S]
        return [np.hstack(interference_blocks(ch, U_k, V, k)), S]

    maps = compile_affine(terms, layout)
    return NuclearLmiProblem(layout=layout, nuclear_terms=tuple(maps[:-1]),
                             lmi_terms=(maps[-1],), eps=eps, name=f"A_U[{k}]")


def solve_precoders(ch: ChannelSet, U_fixed: Sequence[np.ndarray], cfg: SystemConfig,
                    x0: Optional[Sequence[np.ndarray]] = None,
                    options: Optional[SolverOptions] = None) -> Tuple[Optional[List[np.ndarray]], SolveReport]:
    """Solve the precoder subproblem.

    Returns:
        ``(V, report)``; ``V`` is ``None`` when the report is infeasible.
    """
    problem = build_precoder_problem(ch, U_fixed, cfg.eps)
    return _solve_and_unpack(problem, x0, options or SolverOptions())


def solve_precoders_cellular(ch: ChannelSet, U_fixed: Sequence[np.ndarray], cfg: CellularConfig,
                             x0: Optional[Sequence[np.ndarray]] = None,
                             options: Optional[SolverOptions] = None):
    """Precoder subproblem with the cellular block structure.

    Only the rows of user ``u`` are free in column ``u``, so every other entry
    of the returned precoders is exactly zero.
    """
    if not isinstance(cfg, CellularConfig):
        raise ContractViolation("solve_precoders_cellular needs a CellularConfig")
    masks = cellular_masks(cfg)
    if x0 is not None:
        x0 = [np.where(m, x, 0) for m, x in zip(masks, x0)]
    problem = build_precoder_problem(ch, U_fixed, cfg.eps, masks=masks)
    return _solve_and_unpack(problem, x0, options or SolverOptions())


def solve_zeroforcers(ch: ChannelSet, V_fixed: Sequence[np.ndarray], cfg: SystemConfig,
                      x0: Optional[Sequence[np.ndarray]] = None,
                      options: Optional[SolverOptions] = None):
    """Solve the zero-forcer subproblem as K per-receiver problems.

    The merged report sums the objectives and keeps the worst feasibility,
    iteration count and status. ``U`` is ``None`` if any receiver is
    infeasible.
    """
    opts = options or SolverOptions()
    U, reports = [], []
    for k in range(ch.K):
        problem = build_zeroforcer_problem(ch, V_fixed, cfg.eps, k)
        start = None if x0 is None else [x0[k]]
        sol, report = _solve_and_unpack(problem, start, opts)
        reports.append(report)
        U.append(None if sol is None else sol[0])
    merged = SolveReport.merge(reports)
    if any(u is None for u in U):
        return None, merged
    return U, merged


def _solve_and_unpack(problem: NuclearLmiProblem, x0, options: SolverOptions):
    theta, report = solve(problem, x0, options)
    log_solver_report(problem.name, report)
    if theta is None:
        return None, report
    return problem.unpack(theta), report
