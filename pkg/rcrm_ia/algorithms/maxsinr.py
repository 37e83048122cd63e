"""Per-stream SINR maximization, with and without a final orthonormalization."""

import logging
from typing import List

import numpy as np
import scipy.linalg as sla

from rcrm_ia.algorithms.metadata import algorithm_spec
from rcrm_ia.algorithms.rcrm import random_filters
from rcrm_ia.algorithms.trace import AlgoTrace, IterationRecord
from rcrm_ia.core.filters import FilterSet, orthonormalize_filters
from rcrm_ia.core.metrics import rate_at_power
from rcrm_ia.errors import ContractViolation, NumericalError, PreconditionViolation
from rcrm_ia.model.channels import ChannelSet
from rcrm_ia.numerics import qr_orthonormalize

logger = logging.getLogger(__name__)


def _stream_filters(channel, X: List[np.ndarray], p: float, noise_var: float) -> List[np.ndarray]:
    """Unit-norm SINR-maximizing receive filters of every stream of every node.

    ``channel(k, j)`` is the matrix from transmitting node ``j`` to receiving
    node ``k``; ``X[j]`` holds the unit-column transmit filters of node ``j``.
    """
    K = len(X)
    out = []
    for k in range(K):
        HX = [channel(k, j) @ X[j] for j in range(K)]
        rows = HX[k].shape[0]
        total = noise_var * np.eye(rows, dtype=np.complex128)
        for Y in HX:
            total += p * (Y @ Y.conj().T)
        cols = []
        for m in range(X[k].shape[1]):
            h = HX[k][:, m]
            B = total - p * np.outer(h, h.conj())
            try:
                w = sla.solve(B, h, assume_a="pos")
            except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
                raise NumericalError(f"interference-plus-noise covariance of node {k} is singular",
                                     shape=B.shape) from exc
            cols.append(w / np.linalg.norm(w))
        out.append(np.stack(cols, axis=1))
    return out


def max_sinr(ch: ChannelSet, f0: FilterSet, iters: int, P_db: float,
             noise_var: float = 1.0, tau: float = 1e-6) -> AlgoTrace:
    """Alternate SINR-maximizing zero-forcers and reciprocal-network precoders.

    Every stream carries power P/d. The interference-plus-noise covariance of
    stream m at receiver k counts every stream of every transmitter except
    stream m itself, plus noise_var * I. The reported zero-forcers are an
    orthonormal basis of the span of the per-stream receive filters, so the
    rate whitens the noise exactly; the precoder columns have unit norm but
    are not mutually orthogonal.
    """
    if iters < 1:
        raise ContractViolation(f"iteration count must be positive, got {iters}")
    if not noise_var > 0:
        raise ContractViolation(f"noise variance must be positive, got {noise_var}")
    if not f0.check_orthonormal():
        raise PreconditionViolation("max_sinr needs orthonormal initial filters")
    d = f0.d
    p = 10.0 ** (P_db / 10.0) / d
    V = [v / np.linalg.norm(v, axis=0, keepdims=True) for v in f0.V]
    U = list(f0.U)
    records = []
    for _ in range(iters):
        U = _stream_filters(ch.channel, V, p, noise_var)
        V = _stream_filters(ch.reverse, U, p, noise_var)
        f = FilterSet(V=tuple(V), U=tuple(qr_orthonormalize(u) for u in U))
        records.append(IterationRecord.from_filters(
            ch, f, tau, sum_rate=rate_at_power(ch, f, P_db, d, noise_var)))
    logger.debug("max_sinr at %.1f dB: final sum rate %.4f", P_db, records[-1].sum_rate)
    return AlgoTrace(algorithm="max_sinr", records=records, filters=f, iterations_run=iters)


def max_sinr_qr(ch: ChannelSet, f0: FilterSet, iters: int, P_db: float,
                noise_var: float = 1.0, tau: float = 1e-6) -> AlgoTrace:
    """:func:`max_sinr` followed by :func:`orthonormalize_filters`."""
    trace = max_sinr(ch, f0, iters, P_db, noise_var, tau)
    return AlgoTrace(algorithm="max_sinr_qr", records=trace.records,
                     filters=orthonormalize_filters(trace.filters),
                     iterations_run=trace.iterations_run, pre_orthonormal=trace.filters)


@algorithm_spec(tag="max_sinr", description="Per-stream max-SINR from random filters", power_dependent=True)
def run_max_sinr(ch, cfg, budget, rng, P_db, options=None):
    return max_sinr(ch, random_filters(cfg, rng), budget, P_db, cfg.noise_var, cfg.dim_threshold)


@algorithm_spec(tag="max_sinr_qr", description="Max-SINR with orthonormalized output", power_dependent=True)
def run_max_sinr_qr(ch, cfg, budget, rng, P_db, options=None):
    return max_sinr_qr(ch, random_filters(cfg, rng), budget, P_db, cfg.noise_var, cfg.dim_threshold)
