"""Random channel generation for the generic, symbol-extension and cellular families."""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from rcrm_ia.errors import ContractViolation, InvalidConfig
from rcrm_ia.schemas.system import CellularConfig, ChannelKind, SystemConfig

logger = logging.getLogger(__name__)

DIAGONAL_ATOL = 1e-15


class ChannelSet(BaseModel):
    """The K x K grid of channel matrices.

    ``H[k, l]`` is the M_r x M_t channel from transmitter ``l`` to receiver
    ``k``. The array is made read-only on construction.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    H: np.ndarray
    kind: ChannelKind = ChannelKind.GENERIC

    @field_validator("H", mode="before")
    @classmethod
    def _as_array(cls, v):
        A = np.array(v, dtype=np.complex128)
        if A.ndim != 4 or A.shape[0] != A.shape[1] or 0 in A.shape:
            raise ValueError(f"H must have shape (K, K, M_r, M_t), got {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("channel matrices must be finite")
        A.setflags(write=False)
        return A

    @model_validator(mode="after")
    def _check_kind(self) -> "ChannelSet":
        if self.kind == ChannelKind.DIAGONAL_EXTENSION:
            if self.M_r != self.M_t:
                raise ValueError("symbol-extension channels must be square")
            off = self.H * (1 - np.eye(self.M_r))[None, None]
            if np.max(np.abs(off), initial=0.0) > DIAGONAL_ATOL:
                raise ValueError("symbol-extension channels must be diagonal")
        return self

    @property
    def K(self) -> int:
        return self.H.shape[0]

    @property
    def M_r(self) -> int:
        return self.H.shape[2]

    @property
    def M_t(self) -> int:
        return self.H.shape[3]

    def channel(self, k: int, l: int) -> np.ndarray:
        return self.H[k, l]

    def reverse(self, k: int, l: int) -> np.ndarray:
        """Channel from transmitter ``l`` to receiver ``k`` of the reciprocal network."""
        return self.H[l, k].conj().T

    def block(self, k: int, l: int, u: int, d: int) -> np.ndarray:
        """Cellular block H^(u)_{k,l}: the columns owned by user ``u`` of cell ``l``."""
        if self.M_t % d:
            raise ContractViolation(f"M_t={self.M_t} is not divisible by d={d}")
        n = self.M_t // d
        return self.H[k, l][:, u * n:(u + 1) * n]

    def scaled(self, c: float) -> "ChannelSet":
        return ChannelSet(H=c * self.H, kind=self.kind)

    def check_matches(self, cfg: SystemConfig) -> None:
        """Raise ``ContractViolation`` unless the set fits ``cfg``."""
        if (self.K, self.M_r, self.M_t) != (cfg.K, cfg.M_r, cfg.M_t):
            raise ContractViolation(
                f"channels are (K={self.K}, {self.M_r}x{self.M_t}) but the system is "
                f"(K={cfg.K}, {cfg.M_r}x{cfg.M_t})")


def _gaussian(rng: np.random.Generator, shape, complex_gaussian: bool) -> np.ndarray:
    if complex_gaussian:
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return rng.standard_normal(shape).astype(np.complex128)


def gen_iid_channels(cfg: SystemConfig, rng: np.random.Generator) -> ChannelSet:
    """i.i.d. N(0, 1) channel entries (real unless ``cfg.complex_gaussian``)."""
    if cfg.channel_kind != ChannelKind.GENERIC:
        raise ContractViolation(f"gen_iid_channels needs a generic system, got {cfg.channel_kind.value}")
    H = _gaussian(rng, (cfg.K, cfg.K, cfg.M_r, cfg.M_t), cfg.complex_gaussian)
    return ChannelSet(H=H, kind=ChannelKind.GENERIC)


def gen_symbol_extension_channels(cfg: SystemConfig, T: int,
                                  rng: np.random.Generator) -> ChannelSet:
    """T-slot extensions of single-antenna links: T x T diagonal channels."""
    if T < cfg.d:
        raise InvalidConfig(f"extension length T={T} is smaller than d={cfg.d}")
    diag = _gaussian(rng, (cfg.K, cfg.K, T), cfg.complex_gaussian)
    H = np.zeros((cfg.K, cfg.K, T, T), dtype=np.complex128)
    idx = np.arange(T)
    H[:, :, idx, idx] = diag
    return ChannelSet(H=H, kind=ChannelKind.DIAGONAL_EXTENSION)


def gen_cellular_channels(cfg: CellularConfig, rng: np.random.Generator) -> ChannelSet:
    """Each H[k, l] concatenates the d per-user blocks of cell l horizontally."""
    n = cfg.per_user_antennas
    blocks = _gaussian(rng, (cfg.K, cfg.K, cfg.d, cfg.M_r, n), cfg.complex_gaussian)
    H = np.concatenate([blocks[:, :, u] for u in range(cfg.d)], axis=-1)
    return ChannelSet(H=H, kind=ChannelKind.CELLULAR)


def generate_channels(cfg: SystemConfig, rng: np.random.Generator) -> ChannelSet:
    """Dispatch on ``cfg.channel_kind``."""
    if cfg.channel_kind == ChannelKind.GENERIC:
        return gen_iid_channels(cfg, rng)
    if cfg.channel_kind == ChannelKind.DIAGONAL_EXTENSION:
        return gen_symbol_extension_channels(cfg, cfg.extension_slots, rng)
    if not isinstance(cfg, CellularConfig):
        cfg = CellularConfig.model_validate(cfg.model_dump())
    return gen_cellular_channels(cfg, rng)


def proper_slack(cfg: SystemConfig) -> int:
    """M_r + M_t - d(K + 1): the count of equations left over by the variables."""
    return cfg.M_r + cfg.M_t - cfg.d * (cfg.K + 1)


def is_proper(cfg: SystemConfig) -> bool:
    return proper_slack(cfg) >= 0
