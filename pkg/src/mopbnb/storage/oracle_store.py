"""Cache of frontier grids and y(delta, S) thresholds."""

import json
from pathlib import Path
from typing import Optional

import numpy as np

from mopbnb.core.exceptions import StorageError
from mopbnb.core.models import QualityThreshold


class OracleStore:
    """Persists frontier grids (.npy) and quality thresholds (.json) under one directory."""

    def __init__(self, data_dir: str | Path):
        self._dir = Path(data_dir) / "oracles"

    def _frontier_path(self, problem_id: str, n: int, resolution: int) -> Path:
        return self._dir / f"frontier_{problem_id}_n{n}_r{resolution}.npy"

    def _threshold_path(self, problem_id: str, n: int, delta: float, mc_points: int, seed: int) -> Path:
        return self._dir / f"threshold_{problem_id}_n{n}_d{delta:g}_mc{mc_points}_s{seed}.json"

    def exists(self, problem_id: str, n: int, resolution: int) -> bool:
        """Check if a frontier grid is cached."""
        return self._frontier_path(problem_id, n, resolution).exists()

    def load_frontier(self, problem_id: str, n: int, resolution: int) -> Optional[np.ndarray]:
        path = self._frontier_path(problem_id, n, resolution)
        if not path.exists():
            return None
        try:
            return np.load(path)
        except (OSError, ValueError):
            return None

    def save_frontier(self, problem_id: str, n: int, resolution: int, points: np.ndarray) -> Path:
        path = self._frontier_path(problem_id, n, resolution)
        try:
            self._dir.mkdir(parents=True, exist_ok=True)
            np.save(path, points)
        except OSError as e:
            raise StorageError(path, e.strerror or str(e)) from e
        return path

    def load_threshold(
        self, problem_id: str, n: int, delta: float, mc_points: int, seed: int
    ) -> Optional[QualityThreshold]:
        path = self._threshold_path(problem_id, n, delta, mc_points, seed)
        if not path.exists():
            return None
        try:
            with open(path, "r") as f:
                return QualityThreshold.model_validate(json.load(f))
        except (OSError, ValueError):
            return None

    def save_threshold(self, problem_id: str, n: int, threshold: QualityThreshold) -> Path:
        path = self._threshold_path(problem_id, n, threshold.delta, threshold.mc_points, threshold.rng_seed)
        try:
            self._dir.mkdir(parents=True, exist_ok=True)
            with open(path, "w") as f:
                json.dump(threshold.model_dump(), f, indent=2)
        except OSError as e:
            raise StorageError(path, e.strerror or str(e)) from e
        return path
