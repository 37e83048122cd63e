"""Degrees of freedom, sum rate and interference leakage."""

import logging
from typing import List

import numpy as np

from rcrm_ia.core.filters import FilterSet, apply_power, orthonormalize_filters
from rcrm_ia.core.links import LinkMatrices, build_links
from rcrm_ia.model.channels import ChannelSet
from rcrm_ia.numerics import logdet_hpd, rank_tol

logger = logging.getLogger(__name__)


def per_user_dof(S_k: np.ndarray, J_k: np.ndarray, tau: float) -> int:
    """[rank(S_k) - rank(J_k)]^+ with ranks counted above ``tau``."""
    return max(0, rank_tol(S_k, tau) - rank_tol(J_k, tau))


def sum_rate(links: LinkMatrices, noise_var: float = 1.0) -> float:
    """Sum over users of 1/2 log2 det(I + (I + J J^H)^-1 S S^H), in bits.

    With ``noise_var`` != 1 the links are scaled by 1/sigma first. Computed
    as log det(I + JJ^H + SS^H) - log det(I + JJ^H), both Hermitian
    positive definite.
    """
    if noise_var != 1.0:
        links = links.scaled(1.0 / np.sqrt(noise_var))
    total = 0.0
    for S, J in zip(links.S, links.J):
        eye = np.eye(S.shape[0])
        A = eye + J @ J.conj().T
        B = A + S @ S.conj().T
        total += max(0.0, 0.5 * (logdet_hpd(B) - logdet_hpd(A)) / np.log(2.0))
    return total


def interference_cov(ch: ChannelSet, V, k: int, P_lin: float, d: int) -> np.ndarray:
    """Q_k = sum_{l != k} (P/d) H_kl V_l V_l^H H_kl^H at receiver ``k``."""
    Q = np.zeros((ch.M_r, ch.M_r), dtype=np.complex128)
    for l in range(ch.K):
        if l == k:
            continue
        HV = ch.channel(k, l) @ V[l]
        Q += HV @ HV.conj().T
    return (P_lin / d) * Q


def interference_cov_reverse(ch: ChannelSet, U, k: int, P_lin: float, d: int) -> np.ndarray:
    """Interference covariance at transmitter ``k`` of the reciprocal network.

    The reciprocal channel from node ``l`` to node ``k`` is H_lk^H, and the
    zero-forcers act as transmit filters.
    """
    Q = np.zeros((ch.M_t, ch.M_t), dtype=np.complex128)
    for l in range(ch.K):
        if l == k:
            continue
        HU = ch.reverse(k, l) @ U[l]
        Q += HU @ HU.conj().T
    return (P_lin / d) * Q


def leakage(ch: ChannelSet, f: FilterSet, P_lin: float, d: int) -> float:
    """Total interference leakage sum_k tr(U_k^H Q_k U_k)."""
    total = 0.0
    for k in range(ch.K):
        Q = interference_cov(ch, f.V, k, P_lin, d)
        total += float(np.real(np.trace(f.U[k].conj().T @ Q @ f.U[k])))
    return max(total, 0.0)


def leakage_frobenius(links: LinkMatrices, P_lin: float, d: int) -> float:
    """(P/d) sum_k ||J_k||_F^2, equal to :func:`leakage` for the same filters."""
    return (P_lin / d) * float(sum(np.linalg.norm(J) ** 2 for J in links.J))


def user_dims(ch: ChannelSet, f: FilterSet, P_db: float, d: int, tau: float,
              noise_var: float = 1.0) -> List[int]:
    """Interference-free dimensions of every user at power ``P_db``.

    Filters are orthonormalized and given column power 10^(P/10)/d before
    counting singular values above ``tau``.
    """
    g = apply_power(orthonormalize_filters(f), P_db, d)
    links = build_links(ch, g)
    if noise_var != 1.0:
        links = links.scaled(1.0 / np.sqrt(noise_var))
    return [per_user_dof(S, J, tau) for S, J in zip(links.S, links.J)]


def rate_at_power(ch: ChannelSet, f: FilterSet, P_db: float, d: int,
                  noise_var: float = 1.0) -> float:
    """Sum rate of unit-column filters once power ``P_db`` is applied."""
    return sum_rate(build_links(ch, apply_power(f, P_db, d)), noise_var)
