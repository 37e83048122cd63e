"""Per-iteration records and the result of an algorithm run."""

from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, InstanceOf, model_validator

from rcrm_ia.core.filters import FilterSet
from rcrm_ia.core.links import LinkMatrices, build_links
from rcrm_ia.model.channels import ChannelSet
from rcrm_ia.numerics import eigh_hermitian_part, nuclear_norm, rank_tol


class IterationRecord(BaseModel):
    """State of the filters after one iteration (or round) of an algorithm."""

    model_config = ConfigDict(frozen=True)

    nuclear_sum: float = Field(..., ge=0, description="Sum of nuclear norms of the J_k")
    leakage: float = Field(..., ge=0, description="Interference leakage at P/d = 1")
    rank_S: List[int] = Field(..., description="Per-user rank of S_k at the dimension threshold")
    rank_J: List[int] = Field(..., description="Per-user rank of J_k at the dimension threshold")
    sum_rate: Optional[float] = Field(None, description="Sum rate at the operating power, when there is one")
    min_signal_eig: Optional[float] = Field(None, description="Smallest eigenvalue of any herm(S_k)")

    @classmethod
    def from_links(cls, links: LinkMatrices, tau: float,
                   sum_rate: Optional[float] = None) -> "IterationRecord":
        return cls(
            nuclear_sum=float(sum(nuclear_norm(J) for J in links.J)),
            leakage=float(sum(np.linalg.norm(J) ** 2 for J in links.J)),
            rank_S=[rank_tol(S, tau) for S in links.S],
            rank_J=[rank_tol(J, tau) for J in links.J],
            sum_rate=sum_rate,
            min_signal_eig=float(min(eigh_hermitian_part(S)[0][0] for S in links.S)),
        )

    @classmethod
    def from_filters(cls, ch: ChannelSet, f: FilterSet, tau: float,
                     sum_rate: Optional[float] = None) -> "IterationRecord":
        return cls.from_links(build_links(ch, f), tau, sum_rate)


class AlgoTrace(BaseModel):
    """Records of every iteration plus the final filters."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    algorithm: str
    records: List[IterationRecord]
    filters: InstanceOf[FilterSet]
    iterations_run: int = Field(..., ge=0)
    pre_orthonormal: Optional[InstanceOf[FilterSet]] = Field(
        None, description="Filters before the final orthonormalization")

    @model_validator(mode="after")
    def _check_count(self) -> "AlgoTrace":
        if len(self.records) != self.iterations_run:
            raise ValueError(f"{len(self.records)} records for {self.iterations_run} iterations")
        return self

    @property
    def last(self) -> IterationRecord:
        return self.records[-1]
