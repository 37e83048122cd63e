"""Brute-force grid search over unit directions, for checking the solver.

Only the two-user, single-stream, two-antenna case is covered. There every
interference term is a scalar and each free vector enters one signal term and
one interference term, so the objective splits into independent
minimizations of eps * |b^H x| / |a^H x| over unit directions x.
"""

import logging
from typing import Sequence

import numpy as np

from rcrm_ia.errors import ContractViolation
from rcrm_ia.model.channels import ChannelSet

logger = logging.getLogger(__name__)

SIGNAL_FLOOR = 1e-12


def unit_directions(grid: int) -> np.ndarray:
    """grid**2 directions (cos t, e^{ip} sin t), t in [0, pi/2], p in [0, 2 pi)."""
    t = np.linspace(0.0, np.pi / 2, grid)
    p = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    T, P = np.meshgrid(t, p, indexing="ij")
    return np.stack([np.cos(T).ravel(), (np.exp(1j * P) * np.sin(T)).ravel()], axis=1)


def grid_min_ratio(a: np.ndarray, b: np.ndarray, eps: float, grid: int) -> float:
    """min over grid directions x of eps |b^H x| / |a^H x|.

    Each direction is scaled by the smallest complex factor that makes its
    signal term a^H x equal to eps; directions with vanishing signal term are
    rejected.
    """
    X = unit_directions(grid)
    sig = np.abs(X @ a.conj())
    keep = sig > SIGNAL_FLOOR * max(np.linalg.norm(a), 1.0)
    if not np.any(keep):
        return float("inf")
    leak = np.abs(X @ b.conj())
    return float(np.min(eps * leak[keep] / sig[keep]))


def _check_tiny(ch: ChannelSet, side: Sequence[np.ndarray]) -> None:
    if ch.K != 2 or ch.M_t != 2 or ch.M_r != 2:
        raise ContractViolation(f"grid oracle needs K=2 and 2x2 channels, got K={ch.K}, {ch.M_r}x{ch.M_t}")
    if any(np.asarray(x).shape != (2, 1) for x in side):
        raise ContractViolation("grid oracle needs single-stream filters")


def grid_oracle_precoders(ch: ChannelSet, U: Sequence[np.ndarray], eps: float, grid: int = 100) -> float:
    """Grid minimum of the precoder subproblem objective with ``U`` fixed.

    v_k carries signal a = H_kk^H u_k and leaks b = H_lk^H u_l into the
    other receiver l.
    """
    _check_tiny(ch, U)
    u = [np.asarray(x)[:, 0] for x in U]
    total = 0.0
    for k in range(2):
        l = 1 - k
        a = ch.channel(k, k).conj().T @ u[k]
        b = ch.channel(l, k).conj().T @ u[l]
        total += grid_min_ratio(a, b, eps, grid)
    return total


def grid_oracle_zeroforcers(ch: ChannelSet, V: Sequence[np.ndarray], eps: float, grid: int = 100) -> float:
    """Grid minimum of the zero-forcer subproblem objective with ``V`` fixed."""
    _check_tiny(ch, V)
    v = [np.asarray(x)[:, 0] for x in V]
    total = 0.0
    for k in range(2):
        l = 1 - k
        a = ch.channel(k, k) @ v[k]
        b = ch.channel(k, l) @ v[l]
        total += grid_min_ratio(a, b, eps, grid)
    return total
