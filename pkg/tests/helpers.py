import numpy as np

from rcrm_ia.core.filters import FilterSet
from rcrm_ia.schemas.solver import SolverOptions

FAST_SOLVER = SolverOptions(max_iter=20_000)


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_filter_set(rng, K, M_t, M_r, d):
    V = tuple(crandn(rng, M_t, d) for _ in range(K))
    U = tuple(crandn(rng, M_r, d) for _ in range(K))
    return FilterSet(V=V, U=U)
