"""Signal and interference matrices seen after zero-forcing."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from rcrm_ia.core.filters import FilterSet
from rcrm_ia.errors import ContractViolation
from rcrm_ia.model.channels import ChannelSet


@dataclass(frozen=True, eq=False)
class LinkMatrices:
    """``S[k]`` = U_k^H H_kk V_k (d x d) and ``J[k]`` (d x (K-1)d)."""

    S: Tuple[np.ndarray, ...]
    J: Tuple[np.ndarray, ...]

    @property
    def K(self) -> int:
        return len(self.S)

    def scaled(self, c: float) -> "LinkMatrices":
        return LinkMatrices(S=tuple(c * s for s in self.S), J=tuple(c * j for j in self.J))


def interference_blocks(ch: ChannelSet, U_k: np.ndarray, V, k: int):
    """The blocks U_k^H H_kl V_l for l != k in ascending l."""
    return [U_k.conj().T @ ch.channel(k, l) @ V[l] for l in range(ch.K) if l != k]


def build_links(ch: ChannelSet, f: FilterSet) -> LinkMatrices:
    """Signal and interference matrices of every receiver.

    ``J[k]`` concatenates U_k^H H_kl V_l horizontally over l != k in
    ascending order; with a single user it is a d x 0 matrix.

    Raises:
        ContractViolation: on any shape mismatch.
    """
    if f.K != ch.K:
        raise ContractViolation(f"{f.K} filter pairs for a {ch.K}-user channel")
    for k in range(f.K):
        if f.V[k].shape[0] != ch.M_t or f.U[k].shape[0] != ch.M_r:
            raise ContractViolation(
                f"user {k}: V is {f.V[k].shape}, U is {f.U[k].shape} for {ch.M_r}x{ch.M_t} channels")
    d = f.d
    S, J = [], []
    for k in range(ch.K):
        S.append(f.U[k].conj().T @ ch.channel(k, k) @ f.V[k])
        blocks = interference_blocks(ch, f.U[k], f.V, k)
        J.append(np.hstack(blocks) if blocks else np.zeros((d, 0), dtype=np.complex128))
    return LinkMatrices(S=tuple(S), J=tuple(J))
