"""Solution-quality measures against a gridded true frontier."""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from mopbnb.core.domain import MixedPoint, ObjectiveVector
from mopbnb.core.exceptions import DomainError
from mopbnb.core.models import QualityThreshold
from mopbnb.core.pareto import as_matrix
from mopbnb.problems.noise import NoisyProblem
from mopbnb.problems.registry import get_function

logger = logging.getLogger(__name__)

VectorsLike = Union[np.ndarray, Sequence[ObjectiveVector]]


@dataclass
class FrontierOracle:
    """Gridded true efficient frontier with a nearest-point index."""

    points: np.ndarray
    problem_id: str = ""
    resolution: int = 0
    _tree: Optional[cKDTree] = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        self.points = as_matrix(self.points)
        if len(self.points) == 0:
            raise DomainError("frontier oracle needs at least one point")

    @classmethod
    def build(cls, problem_id: str, n: int, resolution: int = 10_000) -> "FrontierOracle":
        points = get_function(problem_id, n).frontier(resolution)
        return cls(points=points, problem_id=problem_id, resolution=resolution)

    @property
    def m(self) -> int:
        return self.points.shape[1]

    @property
    def tree(self) -> cKDTree:
        if self._tree is None:
            self._tree = cKDTree(self.points)
        return self._tree

    @property
    def spacing(self) -> float:
        """Largest gap between consecutive grid points; bounds the discretisation error of D."""
        if len(self.points) < 2:
            return 0.0
        ordered = self.points[np.argsort(self.points[:, 0], kind="stable")]
        return float(np.max(np.linalg.norm(np.diff(ordered, axis=0), axis=1)))

    def distances(self, vectors: VectorsLike) -> np.ndarray:
        """D for every row of `vectors`."""
        matrix = as_matrix(vectors)
        if len(matrix) == 0:
            return np.zeros(0)
        if matrix.shape[1] != self.m:
            raise DomainError(f"expected {self.m} objectives, got {matrix.shape[1]}")
        distance, _ = self.tree.query(matrix)
        return np.asarray(distance, dtype=float)


def distance_to_frontier(v: ObjectiveVector, o: FrontierOracle) -> float:
    """Euclidean distance from v to the nearest frontier point."""
    return float(o.distances([v])[0])


def m1(NS: VectorsLike, o: FrontierOracle) -> float:
    """Mean distance of the approximated front to the true frontier."""
    matrix = as_matrix(NS)
    if len(matrix) == 0:
        raise DomainError("M1 of an empty set is undefined")
    return float(np.mean(o.distances(matrix)))


def m2(NS: VectorsLike, d_star: float) -> float:
    """Distribution: ordered pairs farther apart than d_star, divided by |NS| - 1."""
    matrix = as_matrix(NS)
    if len(matrix) <= 1:
        return 0.0
    far = np.count_nonzero(pdist(matrix) > d_star)
    # pdist lists each unordered pair once
    return 2.0 * far / (len(matrix) - 1)


def m3(NS: VectorsLike) -> float:
    """Extent: square root of the largest pairwise distance."""
    matrix = as_matrix(NS)
    if len(matrix) <= 1:
        return 0.0
    return math.sqrt(float(np.max(pdist(matrix))))


def front_metrics(NS: VectorsLike, o: FrontierOracle, d_star: float) -> tuple[Optional[float], float, float]:
    """(M1, M2, M3) of a front; M1 is None for an empty front."""
    matrix = as_matrix(NS)
    if len(matrix) == 0:
        return None, 0.0, 0.0
    return m1(matrix, o), m2(matrix, d_star), m3(matrix)


def estimate_y_delta(
    problem: NoisyProblem,
    delta: float,
    mc_points: int,
    o: FrontierOracle,
    rng: np.random.Generator,
    seed: int = 0,
) -> QualityThreshold:
    """Empirical delta-quantile of D(X) for X uniform on the domain."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    X = problem.domain.full_box().sample_uniform(rng, mc_points)
    distances = np.sort(o.distances(problem.true_values_batch(X)))
    index = max(0, math.ceil(round(delta * mc_points, 9)) - 1)
    y_delta = float(distances[index])
    logger.debug("y(%.3f) = %.6f from %d points", delta, y_delta, mc_points)
    return QualityThreshold(delta=delta, y_delta=y_delta, mc_points=mc_points, rng_seed=seed)


def in_level_set(x: MixedPoint, problem: NoisyProblem, t: QualityThreshold, o: FrontierOracle) -> bool:
    """D(x) <= y_delta, using the problem's true objective values."""
    return distance_to_frontier(problem.true_values(x), o) <= t.y_delta


def level_set_mask(X: np.ndarray, problem: NoisyProblem, t: QualityThreshold, o: FrontierOracle) -> np.ndarray:
    """Vectorised `in_level_set` over rows of X."""
    if len(X) == 0:
        return np.zeros(0, dtype=bool)
    return o.distances(problem.true_values_batch(X)) <= t.y_delta
