"""Alternating interference-leakage minimization."""

import logging

from rcrm_ia.algorithms.metadata import algorithm_spec
from rcrm_ia.algorithms.rcrm import random_filters
from rcrm_ia.algorithms.trace import AlgoTrace, IterationRecord
from rcrm_ia.core.filters import FilterSet
from rcrm_ia.core.metrics import interference_cov, interference_cov_reverse
from rcrm_ia.errors import ContractViolation, PreconditionViolation
from rcrm_ia.model.channels import ChannelSet
from rcrm_ia.numerics import smallest_eigvecs

logger = logging.getLogger(__name__)


def leakage_min(ch: ChannelSet, f0: FilterSet, iters: int, tau: float = 1e-6) -> AlgoTrace:
    """Minimize total leakage, one block of filters at a time.

    U_k becomes the d least-interfered directions of the receive covariance
    Q_k; then V_k does the same in the reciprocal network, whose channel from
    node l to node k is H_lk^H. Both steps are exact block minimizers, so the
    recorded leakage (at P/d = 1) never increases.
    """
    if iters < 1:
        raise ContractViolation(f"iteration count must be positive, got {iters}")
    if not f0.check_orthonormal():
        raise PreconditionViolation("leakage_min needs orthonormal initial filters")
    d = f0.d
    V, U = list(f0.V), list(f0.U)
    records = []
    for _ in range(iters):
        U = [smallest_eigvecs(interference_cov(ch, V, k, d, d), d) for k in range(ch.K)]
        V = [smallest_eigvecs(interference_cov_reverse(ch, U, k, d, d), d) for k in range(ch.K)]
        records.append(IterationRecord.from_filters(ch, FilterSet(V=tuple(V), U=tuple(U)), tau))
    f = FilterSet(V=tuple(V), U=tuple(U), orthonormal=True)
    logger.debug("leakage_min: %d iterations, final leakage %.3e", iters, records[-1].leakage)
    return AlgoTrace(algorithm="leakage_min", records=records, filters=f, iterations_run=iters)


@algorithm_spec(tag="leakage_min", description="Alternating leakage minimization from random filters")
def run_leakage_min(ch, cfg, budget, rng, options=None):
    return leakage_min(ch, random_filters(cfg, rng), budget, cfg.dim_threshold)
