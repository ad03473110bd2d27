"""Shared test fixtures and configuration."""

import numpy as np
import pytest

from mopbnb.config import Settings
from mopbnb.core.domain import DomainSpec
from mopbnb.core.models import AlgoParams, ExperimentConfig, NoiseSpec, OracleConfig
from mopbnb.problems.registry import make_problem


@pytest.fixture
def unit_square() -> DomainSpec:
    """Continuous domain [0, 1]^2."""
    return DomainSpec.hypercube(2, 0.0, 1.0)


@pytest.fixture
def mixed_domain() -> DomainSpec:
    """One continuous variable in [0, 1] and one integer variable in {0, ..., 4}."""
    return DomainSpec(continuous_bounds=[(0.0, 1.0)], integer_bounds=[(0, 4)])


@pytest.fixture
def zdt1_noisy():
    """ZDT1 in two variables with the default shared noise (sigma = 0.1)."""
    return make_problem("zdt1", 2)


@pytest.fixture
def zdt1_exact():
    """Noise-free ZDT1 in two variables."""
    return make_problem("zdt1", 2, NoiseSpec(sigma=0.0))


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for test data."""
    return np.random.default_rng(12345)


@pytest.fixture
def small_params() -> AlgoParams:
    """Short MOPBnB run."""
    return AlgoParams(max_iterations=4, rng_seed=7)


@pytest.fixture
def test_settings(tmp_path) -> Settings:
    """Single-worker settings with the oracle cache under tmp_path."""
    return Settings(workers=1, data_dir=str(tmp_path / "data"), log_level="INFO")


@pytest.fixture
def small_config(tmp_path) -> ExperimentConfig:
    """Two short MOPBnB(so) runs on ZDT1 with a coarse oracle."""
    return ExperimentConfig(
        problem="zdt1",
        dim=2,
        optimizer="mopbnb-so",
        iterations=3,
        runs=2,
        seed=11,
        out=str(tmp_path / "bundle"),
        oracle=OracleConfig(resolution=200, mc_points=10_000),
    )
