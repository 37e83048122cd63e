"""Random beamforming with zero-forcing receivers for the cellular uplink."""

import logging

import numpy as np

from rcrm_ia.algorithms.metadata import algorithm_spec
from rcrm_ia.algorithms.trace import AlgoTrace, IterationRecord
from rcrm_ia.core.filters import FilterSet
from rcrm_ia.core.metrics import interference_cov
from rcrm_ia.errors import ContractViolation
from rcrm_ia.model.channels import ChannelSet
from rcrm_ia.numerics import smallest_eigvecs
from rcrm_ia.schemas.system import CellularConfig, ChannelKind

logger = logging.getLogger(__name__)


def random_bf_zf_cellular(ch: ChannelSet, cfg: CellularConfig, rng: np.random.Generator) -> FilterSet:
    """Each user beamforms along a random unit vector; receivers keep the d quietest directions.

    Column ``u`` of V_k is zero outside the antennas of user ``u``; U_k
    spans the eigenvectors of the d smallest eigenvalues of Q_k.
    """
    if not isinstance(cfg, CellularConfig) or ch.kind != ChannelKind.CELLULAR:
        raise ContractViolation("random_bf_zf_cellular needs a cellular system and channels")
    ch.check_matches(cfg)
    d, n = cfg.d, cfg.per_user_antennas
    V = []
    for _ in range(cfg.K):
        Vk = np.zeros((cfg.M_t, d), dtype=np.complex128)
        for u in range(d):
            g = rng.standard_normal(n)
            if cfg.complex_gaussian:
                g = g + 1j * rng.standard_normal(n)
            Vk[list(cfg.user_rows(u)), u] = g / np.linalg.norm(g)
        V.append(Vk)
    U = [smallest_eigvecs(interference_cov(ch, V, k, d, d), d) for k in range(cfg.K)]
    return FilterSet(V=tuple(V), U=tuple(U), orthonormal=True)


@algorithm_spec(tag="random_bf_zf", description="Cellular random beamforming plus zero-forcing",
                channel_kinds=[ChannelKind.CELLULAR])
def run_random_bf_zf(ch, cfg, budget, rng, options=None):
    f = random_bf_zf_cellular(ch, cfg, rng)
    record = IterationRecord.from_filters(ch, f, cfg.dim_threshold)
    return AlgoTrace(algorithm="random_bf_zf", records=[record], filters=f, iterations_run=1)
