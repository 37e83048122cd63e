"""Pydantic models describing an interference-channel system."""

from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from rcrm_ia.errors import InvalidConfig


class ChannelKind(str, Enum):
    """Channel families studied."""
    GENERIC = "generic"
    DIAGONAL_EXTENSION = "diagonal_extension"
    CELLULAR = "cellular"


def default_power_grid() -> List[float]:
    return [float(p) for p in range(0, 81, 10)]


class SystemConfig(BaseModel):
    """A homogeneous (M_r x M_t, d)^K system and its evaluation constants."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    K: int = Field(..., ge=1, description="Number of transmitter/receiver pairs")
    M_t: int = Field(..., ge=1, description="Transmit antennas per user")
    M_r: int = Field(..., ge=1, description="Receive antennas per receiver")
    d: int = Field(..., ge=1, description="Streams pursued per user")
    power_grid_db: List[float] = Field(default_factory=default_power_grid,
                                       description="Transmit powers P in dB")
    noise_var: float = Field(1.0, gt=0, description="Noise variance sigma^2 (linear)")
    eps: float = Field(0.1, gt=0, description="Lower bound on the signal matrix eigenvalues")
    dim_threshold: float = Field(1e-6, gt=0,
                                 description="Singular-value cutoff for dimension counting")
    seed: int = Field(0, description="Seed used when no trial seed is derived")
    channel_kind: ChannelKind = ChannelKind.GENERIC
    extension_slots: Optional[int] = Field(None, ge=1,
                                           description="Symbol-extension length T")
    complex_gaussian: bool = Field(False, description="Circular complex entries instead of real")
    orthogonalize_each_round: bool = Field(False,
                                           description="Orthonormalize filters after every round")

    @model_validator(mode="before")
    @classmethod
    def _extension_dimensions(cls, data: Any) -> Any:
        # A T-slot extension of a single-antenna channel is a T x T system.
        if isinstance(data, dict) and data.get("channel_kind") in (
                ChannelKind.DIAGONAL_EXTENSION, ChannelKind.DIAGONAL_EXTENSION.value):
            slots = data.get("extension_slots")
            if slots is None:
                raise ValueError("diagonal_extension requires extension_slots")
            data = dict(data)
            for key in ("M_t", "M_r"):
                if data.get(key, slots) != slots:
                    raise ValueError(f"{key} must equal extension_slots={slots}")
                data[key] = slots
        return data

    @model_validator(mode="after")
    def _check_streams(self) -> "SystemConfig":
        if self.d > min(self.M_t, self.M_r):
            raise ValueError(f"d={self.d} exceeds min(M_t, M_r)={min(self.M_t, self.M_r)}")
        if not self.power_grid_db:
            raise ValueError("power_grid_db must not be empty")
        return self

    @staticmethod
    def power_lin(P_db: float) -> float:
        return 10.0 ** (P_db / 10.0)


class CellularConfig(SystemConfig):
    """K cells with d single-stream users each; user u owns M_t/d antennas."""

    channel_kind: ChannelKind = ChannelKind.CELLULAR

    @model_validator(mode="after")
    def _check_cellular(self) -> "CellularConfig":
        if self.channel_kind != ChannelKind.CELLULAR:
            raise ValueError("CellularConfig requires channel_kind='cellular'")
        if self.M_t % self.d:
            raise ValueError(f"M_t={self.M_t} is not divisible by d={self.d}")
        return self

    @property
    def users_per_cell(self) -> int:
        return self.d

    @property
    def per_user_antennas(self) -> int:
        return self.M_t // self.d

    def user_rows(self, u: int) -> range:
        """Rows of V_k owned by user ``u`` (0-based)."""
        n = self.per_user_antennas
        return range(u * n, (u + 1) * n)

    def zero_rows(self, u: int) -> List[int]:
        """Rows of column ``u`` of V_k forced to zero (0-based)."""
        own = set(self.user_rows(u))
        return [r for r in range(self.M_t) if r not in own]


AnySystemConfig = Union[SystemConfig, CellularConfig]


def load_system_config(data: Dict[str, Any]) -> AnySystemConfig:
    """Build the right config class from a mapping.

    Raises:
        InvalidConfig: wrapping pydantic validation errors.
    """
    kind = data.get("channel_kind", ChannelKind.GENERIC.value)
    model = CellularConfig if kind in (ChannelKind.CELLULAR, ChannelKind.CELLULAR.value) else SystemConfig
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InvalidConfig(f"invalid system configuration: {exc}") from exc
