"""Pydantic models for algorithm, baseline and experiment parameters."""

from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Variant(str, Enum):
    SO = "so"
    WR = "wr"


class Schedules(BaseModel):
    """Radius, sample-size and quality parameters of the branch-and-bound loop."""

    model_config = ConfigDict(frozen=True)

    r0: float = Field(default=0.1, gt=0)
    B: int = Field(default=2, ge=2)
    c: int = Field(default=50, ge=1)
    delta: float = Field(default=0.1, gt=0, lt=1)
    alpha: float = Field(default=0.1, gt=0, lt=1)
    # geometric: r0 B^(-k/n); polynomial: r0 k^(-1/(4n))
    radius_rule: Literal["geometric", "polynomial"] = "geometric"


class AlgoParams(BaseModel):
    """Everything a single MOPBnB run needs besides the problem."""

    model_config = ConfigDict(frozen=True)

    schedules: Schedules = Field(default_factory=Schedules)
    variant: Variant = Variant.SO
    wr_R1: int = Field(default=10, ge=1)
    wr_cap: int = Field(default=1000, ge=1)
    max_iterations: int = Field(default=12, ge=1)
    min_branch_width: float = Field(default=1e-3, gt=0)
    rng_seed: int = Field(default=0, ge=0)
    permanent_pruning: bool = False
    pruned_sampling: Literal["per_region", "pooled"] = "pooled"

    @model_validator(mode="after")
    def _cap_covers_start(self) -> "AlgoParams":
        if self.wr_cap < self.wr_R1:
            raise ValueError(f"wr_cap ({self.wr_cap}) must be at least wr_R1 ({self.wr_R1})")
        return self


class NoiseSpec(BaseModel):
    """Multiplicative Gaussian noise g = f0 (1 + xi)."""

    model_config = ConfigDict(frozen=True)

    sigma: float = Field(default=0.1, ge=0, allow_inf_nan=False)
    shared: bool = True
    interpretation: Literal["std"] = "std"


class NSGA2Params(BaseModel):
    model_config = ConfigDict(frozen=True)

    population: int = Field(default=50, ge=4)
    generations: int = Field(default=100, ge=1)
    crossover_prob: float = Field(default=0.9, ge=0, le=1)
    # None means 1/n
    mutation_prob: Optional[float] = Field(default=None, ge=0, le=1)
    eta_crossover: float = Field(default=20.0, ge=0)
    eta_mutation: float = Field(default=20.0, ge=0)
    replications: int = Field(default=20, ge=1)

    @field_validator("population")
    @classmethod
    def _even(cls, value: int) -> int:
        if value % 2:
            raise ValueError(f"population must be even, got {value}")
        return value


class UniformParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    estimator: Literal["so", "wr"] = "so"
    replications: int = Field(default=20, ge=1)
    checkpoints: Optional[list[int]] = None

    @field_validator("checkpoints")
    @classmethod
    def _increasing(cls, value: Optional[list[int]]) -> Optional[list[int]]:
        if value is None:
            return value
        if not value or value[0] < 1 or any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("checkpoints must be positive and strictly increasing")
        return value


class BaselineParams(BaseModel):
    """Budget plus per-optimizer settings for the comparison methods."""

    model_config = ConfigDict(frozen=True)

    budget: Optional[int] = Field(default=None, ge=1)
    nsga2: NSGA2Params = Field(default_factory=NSGA2Params)
    uniform: UniformParams = Field(default_factory=UniformParams)


class OracleConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    resolution: int = Field(default=10_000, ge=2)
    d_star: float = Field(default=0.01, gt=0)
    delta: float = Field(default=0.1, gt=0, lt=1)
    mc_points: int = Field(default=100_000, ge=10_000)
    seed: int = Field(default=0, ge=0)
    metric_basis: Literal["estimated", "true"] = "estimated"
    compute_threshold: bool = False


class QualityThreshold(BaseModel):
    """Monte Carlo estimate of y(delta, S)."""

    model_config = ConfigDict(frozen=True)

    delta: float = Field(gt=0, lt=1)
    y_delta: float = Field(ge=0)
    mc_points: int = Field(ge=1)
    rng_seed: int = 0


OPTIMIZERS = ("mopbnb-so", "mopbnb-wr", "uniform", "nsga2")


class ExperimentConfig(BaseModel):
    """A seeded multi-run experiment, as stored in the YAML config file."""

    model_config = ConfigDict(extra="forbid")

    problem: str = "zdt1"
    dim: int = Field(default=2, ge=1)
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    optimizer: str = "mopbnb-so"
    algo: AlgoParams = Field(default_factory=AlgoParams)
    baselines: BaselineParams = Field(default_factory=BaselineParams)
    iterations: int = Field(default=12, ge=1)
    runs: int = Field(default=50, ge=1)
    seed: int = Field(default=0, ge=0)
    out: str = "results/run"
    oracle: OracleConfig = Field(default_factory=OracleConfig)

    @field_validator("problem", "optimizer")
    @classmethod
    def _lower(cls, value: str) -> str:
        return value.strip().lower()
