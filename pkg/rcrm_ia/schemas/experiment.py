"""Pydantic models for Monte-Carlo experiment files and their results."""

import math
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from rcrm_ia.schemas.solver import SolverOptions
from rcrm_ia.schemas.system import SystemConfig, load_system_config

SCHEMA_VERSION = 1

RESULT_COLUMNS = ("algorithm", "P_db", "mean_sum_rate", "std_sum_rate",
                  "mean_user_dims", "trials", "failures")


def default_budgets() -> Dict[str, Union[int, List[int]]]:
    return {"rcrm": 5, "leakage_min": 2000, "max_sinr": 2000, "max_sinr_qr": 2000}


class AlgorithmVariant(BaseModel):
    """One algorithm at one iteration budget, as it appears in result rows."""
    model_config = ConfigDict(frozen=True)

    label: str
    tag: str
    budget: int


class ExperimentSpec(BaseModel):
    """A complete, reproducible experiment description."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema",
                                description="Experiment file format version")
    name: str = Field("experiment", description="Free-form experiment name")
    system: SystemConfig
    algorithms: List[str] = Field(..., min_length=1)
    trials: int = Field(20, ge=1, description="Monte-Carlo channel realizations")
    iteration_budgets: Dict[str, Union[int, List[int]]] = Field(
        default_factory=default_budgets, alias="budgets",
        description="Iterations per algorithm; a list yields one variant per budget")
    output_path: str = Field("results.csv")
    master_seed: int = Field(0)
    format: Literal["csv", "json"] = "csv"
    workers: Optional[int] = Field(None, ge=1, description="Parallel trial workers")
    solver: SolverOptions = Field(default_factory=SolverOptions)

    @field_validator("schema_version")
    @classmethod
    def _check_schema(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported experiment schema {v}, expected {SCHEMA_VERSION}")
        return v

    @field_validator("system", mode="before")
    @classmethod
    def _build_system(cls, v: Any) -> Any:
        if isinstance(v, dict):
            return load_system_config(v)
        return v

    @field_validator("iteration_budgets")
    @classmethod
    def _check_budgets(cls, v: Dict[str, Union[int, List[int]]]):
        for tag, budget in v.items():
            values = budget if isinstance(budget, list) else [budget]
            if not values or any(b < 1 for b in values):
                raise ValueError(f"iteration budget for {tag!r} must be >= 1")
        return v

    @model_validator(mode="after")
    def _unique_algorithms(self) -> "ExperimentSpec":
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("algorithms must not repeat")
        return self

    def budgets_for(self, tag: str) -> List[int]:
        budget = self.iteration_budgets.get(tag, default_budgets().get(tag, 1))
        return list(budget) if isinstance(budget, list) else [budget]

    def variants(self) -> List[AlgorithmVariant]:
        """Expand the algorithm list into labelled budget variants."""
        out = []
        for tag in self.algorithms:
            budgets = self.budgets_for(tag)
            for b in budgets:
                label = f"{tag}:n={b}" if len(budgets) > 1 else tag
                out.append(AlgorithmVariant(label=label, tag=tag, budget=b))
        return out


class ResultRow(BaseModel):
    """Aggregated metrics of one algorithm variant at one power point."""

    algorithm: str = Field(..., description="Algorithm label")
    P_db: float = Field(..., description="Transmit power in dB")
    mean_sum_rate: float = Field(..., description="Bits per channel use, NaN when no trial succeeded")
    std_sum_rate: float = Field(..., description="Population standard deviation over trials")
    mean_user_dims: float = Field(..., description="Average interference-free dimensions per user")
    trials: int = Field(..., ge=0, description="Successful trials")
    failures: int = Field(0, ge=0, description="Trials excluded because the algorithm aborted")

    @model_validator(mode="after")
    def _check_means(self) -> "ResultRow":
        for name in ("mean_sum_rate", "std_sum_rate", "mean_user_dims"):
            value = getattr(self, name)
            if math.isnan(value):
                if self.trials:
                    raise ValueError(f"{name} is NaN with {self.trials} successful trials")
            elif value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")
        return self

    def key(self) -> Tuple[str, float]:
        return self.algorithm, self.P_db
