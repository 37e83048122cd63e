"""Precoder / zero-forcer sets and the transformations that preserve their ranks."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from rcrm_ia.errors import ContractViolation, DegenerateInput, PreconditionViolation
from rcrm_ia.model.channels import ChannelSet
from rcrm_ia.numerics import as_complex_matrix, internal_rank, qr_orthonormalize

logger = logging.getLogger(__name__)

UNIT_COLUMN_TOL = 1e-8
ORTHONORMAL_TOL = 1e-9


def _frozen(M) -> np.ndarray:
    A = np.array(as_complex_matrix(M))
    A.setflags(write=False)
    return A


@dataclass(frozen=True, eq=False)
class FilterSet:
    """Per-user precoders ``V[k]`` (M_t x d) and zero-forcers ``U[k]`` (M_r x d).

    Every matrix must have full column rank. ``orthonormal`` marks sets whose
    precoders have mutually orthogonal columns of equal power and whose
    zero-forcers are orthonormal; ``power_db`` is the column power applied by
    :func:`apply_power`, if any.
    """

    V: Tuple[np.ndarray, ...]
    U: Tuple[np.ndarray, ...]
    orthonormal: bool = False
    power_db: Optional[float] = None

    def __post_init__(self):
        V = tuple(_frozen(v) for v in self.V)
        U = tuple(_frozen(u) for u in self.U)
        if len(V) != len(U) or not V:
            raise ContractViolation(f"need K precoders and K zero-forcers, got {len(V)} and {len(U)}")
        d = V[0].shape[1]
        for k, (v, u) in enumerate(zip(V, U)):
            if v.shape[1] != d or u.shape[1] != d:
                raise ContractViolation(f"user {k}: expected {d} streams, got V {v.shape}, U {u.shape}")
            if internal_rank(v) != d:
                raise DegenerateInput("precoder is not full column rank", user=k)
            if internal_rank(u) != d:
                raise DegenerateInput("zero-forcer is not full column rank", user=k)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "U", U)

    @property
    def K(self) -> int:
        return len(self.V)

    @property
    def d(self) -> int:
        return self.V[0].shape[1]

    def unit_columns(self, tol: float = UNIT_COLUMN_TOL) -> bool:
        """True when every precoder column has unit norm."""
        return all(np.allclose(np.linalg.norm(v, axis=0), 1.0, rtol=0, atol=tol) for v in self.V)

    def check_orthonormal(self, tol: float = ORTHONORMAL_TOL) -> bool:
        """V_k^H V_k = c I_d (c shared by all users) and U_k^H U_k = I_d."""
        eye = np.eye(self.d)
        c = np.real(np.vdot(self.V[0][:, 0], self.V[0][:, 0]))
        for v, u in zip(self.V, self.U):
            if not np.allclose(v.conj().T @ v, c * eye, atol=tol * max(1.0, c)):
                return False
            if not np.allclose(u.conj().T @ u, eye, atol=tol):
                return False
        return True


def orthonormalize_filters(f: FilterSet) -> FilterSet:
    """Replace every V_k and U_k by an orthonormal basis of its column space.

    Ranks of all signal and interference matrices are unchanged, since each
    factor changes by an invertible d x d right multiplication.

    Raises:
        DegenerateInput: naming the first rank-deficient user.
    """
    V, U = [], []
    for k, (v, u) in enumerate(zip(f.V, f.U)):
        try:
            V.append(qr_orthonormalize(v))
            U.append(qr_orthonormalize(u))
        except DegenerateInput as exc:
            raise DegenerateInput(str(exc), user=k) from exc
    return FilterSet(V=tuple(V), U=tuple(U), orthonormal=True, power_db=None)


def apply_power(f: FilterSet, P_db: float, d: int) -> FilterSet:
    """Scale precoder columns to squared norm 10^(P/10) / d.

    Requires unit-norm precoder columns (orthonormal sets, or the unit-column
    output of max-SINR).

    Raises:
        ContractViolation: if a precoder column is not unit norm.
    """
    if not f.unit_columns():
        raise ContractViolation("apply_power needs unit-norm precoder columns; orthonormalize first")
    gain = np.sqrt(10.0 ** (P_db / 10.0) / d)
    return FilterSet(V=tuple(gain * v for v in f.V), U=f.U,
                     orthonormal=f.orthonormal, power_db=float(P_db))


def normalize_columns(f: FilterSet) -> FilterSet:
    """Unit-norm precoder and zero-forcer columns, directions unchanged."""
    def unit(M):
        return M / np.linalg.norm(M, axis=0, keepdims=True)
    return FilterSet(V=tuple(unit(v) for v in f.V), U=tuple(unit(u) for u in f.U),
                     orthonormal=False, power_db=None)


def _signal_factors(ch: ChannelSet, f: FilterSet) -> Sequence[np.ndarray]:
    S = []
    for k in range(f.K):
        S_k = f.U[k].conj().T @ ch.channel(k, k) @ f.V[k]
        if internal_rank(S_k) != f.d:
            raise PreconditionViolation(f"user {k}: signal matrix has rank below d={f.d}")
        S.append(S_k)
    return S


def pd_signal_pairs(ch: ChannelSet, f: FilterSet) -> Tuple[FilterSet, FilterSet]:
    """Both positive-definite rewrites of a feasible filter set.

    Returns ``(U, V_hat)`` with V_hat_k = V_k V_k^H H_kk^H U_k and
    ``(U_hat, V)`` with U_hat_k = U_k U_k^H H_kk V_k. In each pair the signal
    matrices are S_k S_k^H and S_k^H S_k respectively (Hermitian positive
    definite) and every interference matrix keeps its rank.

    Raises:
        PreconditionViolation: if some S_k is rank deficient.
    """
    S = _signal_factors(ch, f)
    V_hat = tuple(v @ s.conj().T for v, s in zip(f.V, S))
    U_hat = tuple(u @ s for u, s in zip(f.U, S))
    return FilterSet(V=V_hat, U=f.U), FilterSet(V=f.V, U=U_hat)


def pd_signal_transform(ch: ChannelSet, f: FilterSet, side: str = "V") -> FilterSet:
    """Map a feasible filter set to one with Hermitian positive-definite S_k.

    ``side`` selects which half is rewritten: ``"V"`` (precoders, default) or
    ``"U"`` (zero-forcers); the other half is kept.
    """
    if side not in ("V", "U"):
        raise ContractViolation(f"side must be 'V' or 'U', got {side!r}")
    precoder_side, zeroforcer_side = pd_signal_pairs(ch, f)
    return precoder_side if side == "V" else zeroforcer_side
