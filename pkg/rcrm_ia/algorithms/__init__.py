"""The alternating nuclear-norm heuristic and the comparison schemes."""

from rcrm_ia.algorithms.trace import IterationRecord, AlgoTrace
from rcrm_ia.algorithms.metadata import AlgorithmSpec, algorithm_spec
from rcrm_ia.algorithms.rcrm import rcrm_alternating, init_zeroforcers, random_filters
from rcrm_ia.algorithms.leakage import leakage_min
from rcrm_ia.algorithms.maxsinr import max_sinr, max_sinr_qr
from rcrm_ia.algorithms.cellular import random_bf_zf_cellular
from rcrm_ia.algorithms.registry import AlgorithmRegistry, get_registry

__all__ = [
    "IterationRecord",
    "AlgoTrace",
    "AlgorithmSpec",
    "algorithm_spec",
    "rcrm_alternating",
    "init_zeroforcers",
    "random_filters",
    "leakage_min",
    "max_sinr",
    "max_sinr_qr",
    "random_bf_zf_cellular",
    "AlgorithmRegistry",
    "get_registry",
]
