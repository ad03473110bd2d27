"""Results bundle persistence."""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import pandas as pd
import yaml
from pydantic import ValidationError

from mopbnb.core.exceptions import StorageError
from mopbnb.core.models import ExperimentConfig

TRAJECTORY_COLUMNS = [
    "run_id",
    "iteration",
    "evals",
    "active_regions",
    "pruned_regions",
    "archive_size",
    "r_k",
    "n_k",
    "m1",
    "m2",
    "m3",
]
AGGREGATED = ["evals", "m1", "m2", "m3"]
# 17 significant digits round-trip every double
FLOAT_FORMAT = "%.17g"


def aggregate_trajectories(frame: pd.DataFrame) -> pd.DataFrame:
    """Per-iteration cross-run mean and standard deviation."""
    grouped = frame.groupby("iteration", sort=True)[AGGREGATED]
    stats = grouped.agg(["mean", "std"])
    stats.columns = [f"{name}_{stat}" for name, stat in stats.columns]
    stats.insert(0, "runs", grouped.size())
    return stats.reset_index()


@dataclass
class ResultsBundle:
    config: ExperimentConfig
    trajectories: pd.DataFrame
    aggregate: pd.DataFrame
    runs: list[dict] = field(default_factory=list)
    manifest: dict = field(default_factory=dict)
    path: Optional[Path] = None

    @property
    def optimizer(self) -> str:
        return self.config.optimizer

    @property
    def problem(self) -> str:
        return self.config.problem

    @property
    def dim(self) -> int:
        return self.config.dim

    @property
    def label(self) -> str:
        sigma = self.config.noise.sigma
        return f"{self.optimizer} (sigma={sigma:g})"


class BundleStore:
    """Reads and writes a bundle directory.

    Layout: config.yaml, trajectories.csv, aggregate.csv, manifest.json and
    runs/run_XXXX.json (final archive and region tree of each run).
    """

    def __init__(self, root: str | Path):
        self._root = Path(root)

    @property
    def root(self) -> Path:
        return self._root

    def exists(self) -> bool:
        """Check if a bundle has been written here."""
        return (self._root / "manifest.json").exists()

    def save(self, bundle: ResultsBundle) -> Path:
        """Write every file of the bundle; returns the bundle directory."""
        try:
            (self._root / "runs").mkdir(parents=True, exist_ok=True)
            with open(self._root / "config.yaml", "w") as f:
                yaml.safe_dump(bundle.config.model_dump(mode="json"), f, sort_keys=False)
            bundle.trajectories.to_csv(
                self._root / "trajectories.csv", index=False, columns=TRAJECTORY_COLUMNS, float_format=FLOAT_FORMAT
            )
            bundle.aggregate.to_csv(self._root / "aggregate.csv", index=False, float_format=FLOAT_FORMAT)
            for run in bundle.runs:
                with open(self._root / "runs" / f"run_{run['run_id']:04d}.json", "w") as f:
                    json.dump(run, f, indent=2)
            with open(self._root / "manifest.json", "w") as f:
                json.dump(bundle.manifest, f, indent=2)
        except OSError as e:
            raise StorageError(self._root, e.strerror or str(e)) from e
        bundle.path = self._root
        return self._root

    def load(self, include_runs: bool = True) -> ResultsBundle:
        """Read a bundle back; raises StorageError if it is missing or corrupt."""
        if not self.exists():
            raise StorageError(self._root, "not a results bundle (manifest.json missing)")
        try:
            with open(self._root / "config.yaml", "r") as f:
                config = ExperimentConfig.model_validate(yaml.safe_load(f))
            with open(self._root / "manifest.json", "r") as f:
                manifest = json.load(f)
            trajectories = pd.read_csv(
                self._root / "trajectories.csv", dtype={"n_k": "Int64"}, float_precision="round_trip"
            )
            aggregate = pd.read_csv(self._root / "aggregate.csv", float_precision="round_trip")
            runs = []
            if include_runs:
                for path in sorted((self._root / "runs").glob("run_*.json")):
                    with open(path, "r") as f:
                        runs.append(json.load(f))
        except (OSError, ValueError, yaml.YAMLError, ValidationError) as e:
            raise StorageError(self._root, f"corrupt bundle ({e})") from e
        return ResultsBundle(config, trajectories, aggregate, runs, manifest, self._root)
