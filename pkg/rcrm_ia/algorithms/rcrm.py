"""Alternating nuclear-norm heuristic for the rank-constrained rank minimization.

Each round solves the precoder subproblem with the zero-forcers fixed, then
the zero-forcer subproblem with the new precoders fixed. Every subproblem is
warm-started from the previous round's solution. The filters are
orthonormalized once after the last round, which changes no rank.
"""

import logging
from typing import List, Optional

import numpy as np

from rcrm_ia.algorithms.metadata import algorithm_spec
from rcrm_ia.algorithms.trace import AlgoTrace, IterationRecord
from rcrm_ia.core.filters import FilterSet, orthonormalize_filters
from rcrm_ia.cvxsolve.subproblems import solve_precoders, solve_precoders_cellular, solve_zeroforcers
from rcrm_ia.errors import ContractViolation, SolverInfeasible
from rcrm_ia.model.channels import ChannelSet
from rcrm_ia.numerics import qr_orthonormalize
from rcrm_ia.schemas.solver import SolverOptions
from rcrm_ia.schemas.system import ChannelKind, SystemConfig

logger = logging.getLogger(__name__)


def _haar_like(rng: np.random.Generator, rows: int, d: int, complex_gaussian: bool) -> np.ndarray:
    G = rng.standard_normal((rows, d))
    if complex_gaussian:
        G = (G + 1j * rng.standard_normal((rows, d))) / np.sqrt(2.0)
    return qr_orthonormalize(G)


def init_zeroforcers(cfg: SystemConfig, rng: np.random.Generator) -> List[np.ndarray]:
    """K orthonormal M_r x d matrices from QR of Gaussian matrices."""
    return [_haar_like(rng, cfg.M_r, cfg.d, cfg.complex_gaussian) for _ in range(cfg.K)]


def random_filters(cfg: SystemConfig, rng: np.random.Generator) -> FilterSet:
    """Orthonormal random precoders and zero-forcers, drawn like :func:`init_zeroforcers`."""
    V = [_haar_like(rng, cfg.M_t, cfg.d, cfg.complex_gaussian) for _ in range(cfg.K)]
    U = init_zeroforcers(cfg, rng)
    return FilterSet(V=tuple(V), U=tuple(U), orthonormal=True)


def rcrm_alternating(ch: ChannelSet, cfg: SystemConfig, n: int, rng: np.random.Generator,
                     options: Optional[SolverOptions] = None) -> AlgoTrace:
    """Run ``n`` rounds of the alternating heuristic.

    Raises:
        SolverInfeasible: when a subproblem is infeasible, with the 0-based
            round index and the solver report.
    """
    if n < 1:
        raise ContractViolation(f"number of rounds must be positive, got {n}")
    ch.check_matches(cfg)
    cellular = cfg.channel_kind == ChannelKind.CELLULAR
    U = init_zeroforcers(cfg, rng)
    V = None
    records = []
    f = None
    for r in range(n):
        if cellular:
            V, report = solve_precoders_cellular(ch, U, cfg, x0=V, options=options)
        else:
            V, report = solve_precoders(ch, U, cfg, x0=V, options=options)
        if V is None:
            raise SolverInfeasible(r, report)
        U_new, report = solve_zeroforcers(ch, V, cfg, x0=U, options=options)
        if U_new is None:
            raise SolverInfeasible(r, report)
        U = U_new
        f = FilterSet(V=tuple(V), U=tuple(U))
        if cfg.orthogonalize_each_round:
            f = orthonormalize_filters(f)
            V, U = list(f.V), list(f.U)
        record = IterationRecord.from_filters(ch, f, cfg.dim_threshold)
        records.append(record)
        logger.debug("rcrm round %d: nuclear_sum=%.6g ranks_J=%s", r, record.nuclear_sum, record.rank_J)

    return AlgoTrace(algorithm="rcrm", records=records, filters=orthonormalize_filters(f),
                     iterations_run=n, pre_orthonormal=f)


@algorithm_spec(tag="rcrm",
                description="Alternating nuclear-norm minimization, orthonormalized at the end")
def run_rcrm(ch, cfg, budget, rng, options=None):
    return rcrm_alternating(ch, cfg, budget, rng, options)
