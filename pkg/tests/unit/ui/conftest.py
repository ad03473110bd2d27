"""Hand-built bundles for the figure and table tests."""

import pandas as pd
import pytest

from mopbnb.core.models import ExperimentConfig
from mopbnb.storage.bundle_store import TRAJECTORY_COLUMNS, ResultsBundle, aggregate_trajectories

REGIONS = [
    {"id": 0, "parent_id": None, "lower": [0.0, 0.0], "upper": [1.0, 1.0], "status": "branched", "pruned_at": None},
    {"id": 1, "parent_id": 0, "lower": [0.0, 0.0], "upper": [0.5, 1.0], "status": "active", "pruned_at": None},
    {"id": 2, "parent_id": 0, "lower": [0.5, 0.0], "upper": [1.0, 1.0], "status": "pruned", "pruned_at": 1},
]


def make_bundle(optimizer: str = "mopbnb-so", problem: str = "zdt1", dim: int = 2, evals_scale: int = 1) -> ResultsBundle:
    rows = []
    for run_id in range(2):
        for iteration in (1, 2, 3):
            rows.append(
                {
                    "run_id": run_id,
                    "iteration": iteration,
                    "evals": 100 * iteration * evals_scale + run_id,
                    "active_regions": 2,
                    "pruned_regions": 1,
                    "archive_size": 2,
                    "r_k": 0.05,
                    "n_k": 29,
                    "m1": 0.1 / iteration + 0.01 * run_id,
                    "m2": 2.0,
                    "m3": 1.0 + 0.1 * run_id,
                }
            )
    frame = pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)
    regions = REGIONS if optimizer.startswith("mopbnb") else []
    runs = [
        {
            "run_id": run_id,
            "seed": run_id,
            "optimizer": optimizer,
            "archive": {"points": [[0.1, 0.0], [0.9, 0.0]], "estimates": [[0.1, 0.7], [0.9, 0.05]]},
            "regions": regions,
        }
        for run_id in range(2)
    ]
    config = ExperimentConfig(problem=problem, dim=dim, optimizer=optimizer, runs=2, iterations=3)
    return ResultsBundle(config, frame, aggregate_trajectories(frame), runs, {})


@pytest.fixture
def so_bundle() -> ResultsBundle:
    """Two-run MOPBnB(so) bundle on ZDT1 n=2."""
    return make_bundle()


@pytest.fixture
def uniform_bundle() -> ResultsBundle:
    """Two-run uniform-search bundle on ZDT1 n=2 (no region tree)."""
    return make_bundle("uniform", evals_scale=2)


@pytest.fixture
def bundle_factory():
    """Build bundles with a chosen optimizer, problem and dimension."""
    return make_bundle
