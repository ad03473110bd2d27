"""Non-dominated set extraction and the sorting helpers built on it."""

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from mopbnb.core.domain import ObjectiveVector
from mopbnb.core.exceptions import DomainError

VectorsLike = Union[np.ndarray, Sequence[ObjectiveVector], Sequence[Sequence[float]]]

# below this size the divide-and-conquer recursion switches to the all-pairs scan
_BRUTE_FORCE_SIZE = 32
_CHUNK_ROWS = 2048


def as_matrix(vectors: VectorsLike) -> np.ndarray:
    """Stack objective vectors into an (N, m) float array, checking m is uniform."""
    if isinstance(vectors, np.ndarray):
        matrix = np.asarray(vectors, dtype=float)
        if matrix.size == 0:
            return matrix.reshape(0, matrix.shape[-1] if matrix.ndim == 2 else 0)
        if matrix.ndim != 2:
            raise DomainError(f"expected a 2-D array of objective vectors, got shape {matrix.shape}")
        return matrix
    rows = [v.values if isinstance(v, ObjectiveVector) else tuple(v) for v in vectors]
    if not rows:
        return np.empty((0, 0))
    lengths = {len(r) for r in rows}
    if len(lengths) > 1:
        raise DomainError(f"mixed objective counts: {sorted(lengths)}")
    return np.asarray(rows, dtype=float)


def _dominated_by(candidates: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Mask of candidate rows dominated by at least one reference row."""
    out = np.zeros(len(candidates), dtype=bool)
    if len(reference) == 0 or len(candidates) == 0:
        return out
    step = max(1, _CHUNK_ROWS * 64 // max(len(reference), 1))
    for start in range(0, len(candidates), step):
        block = candidates[start : start + step, None, :]
        no_worse = np.all(reference[None, :, :] <= block, axis=2)
        better = np.any(reference[None, :, :] < block, axis=2)
        out[start : start + step] = np.any(no_worse & better, axis=1)
    return out


def _front_mask_2d(matrix: np.ndarray) -> np.ndarray:
    order = np.lexsort((matrix[:, 1], matrix[:, 0]))
    ordered = matrix[order]
    count = len(ordered)
    new_group = np.ones(count, dtype=bool)
    new_group[1:] = np.any(ordered[1:] != ordered[:-1], axis=1)
    group_start = np.maximum.accumulate(np.where(new_group, np.arange(count), 0))
    running_min = np.minimum.accumulate(ordered[:, 1])
    # best f2 among strictly earlier (lexicographically smaller) vectors
    prior = np.where(group_start > 0, running_min[group_start - 1], np.inf)
    mask = np.empty(count, dtype=bool)
    mask[order] = prior > ordered[:, 1]
    return mask


def _kung(ordered: np.ndarray) -> np.ndarray:
    """Front indices of a lexicographically sorted matrix."""
    if len(ordered) <= _BRUTE_FORCE_SIZE:
        return np.flatnonzero(~_dominated_by(ordered, ordered))
    half = len(ordered) // 2
    top = _kung(ordered[:half])
    bottom = _kung(ordered[half:]) + half
    # rows of the second half can never dominate rows of the first
    survivors = ~_dominated_by(ordered[bottom], ordered[top])
    return np.concatenate([top, bottom[survivors]])


def front_mask(matrix: np.ndarray) -> np.ndarray:
    """Boolean mask of non-dominated rows of an (N, m) array."""
    matrix = as_matrix(matrix)
    if len(matrix) == 0:
        return np.zeros(0, dtype=bool)
    if matrix.shape[1] < 2:
        raise DomainError("objective vectors need at least two entries")
    if matrix.shape[1] == 2:
        return _front_mask_2d(matrix)
    order = np.lexsort(matrix.T[::-1])
    mask = np.zeros(len(matrix), dtype=bool)
    mask[order[_kung(matrix[order])]] = True
    return mask


def non_dominated_front(vectors: VectorsLike) -> set[int]:
    """Indices of the vectors not dominated by any other; duplicates all kept.

    Two objectives use a sort-and-sweep, three or more the divide-and-conquer
    merge.
    """
    return {int(i) for i in np.flatnonzero(front_mask(as_matrix(vectors)))}


def brute_force_front(vectors: VectorsLike) -> set[int]:
    """All-pairs reference for `non_dominated_front`."""
    matrix = as_matrix(vectors)
    if len(matrix) == 0:
        return set()
    return {int(i) for i in np.flatnonzero(~_dominated_by(matrix, matrix))}


def dominance_matrix(matrix: np.ndarray) -> np.ndarray:
    """`out[i, j]` is True when row i dominates row j."""
    no_worse = np.all(matrix[:, None, :] <= matrix[None, :, :], axis=2)
    better = np.any(matrix[:, None, :] < matrix[None, :, :], axis=2)
    return no_worse & better


def fast_non_dominated_sort(vectors: VectorsLike) -> list[np.ndarray]:
    """Rank rows into successive fronts (rank 0 first)."""
    matrix = as_matrix(vectors)
    if len(matrix) == 0:
        return []
    dominates = dominance_matrix(matrix)
    counts = dominates.sum(axis=0)
    assigned = np.zeros(len(matrix), dtype=bool)
    fronts = []
    while not assigned.all():
        current = np.flatnonzero((counts == 0) & ~assigned)
        fronts.append(current)
        assigned[current] = True
        counts = counts - dominates[current].sum(axis=0)
    return fronts


def crowding_distance(vectors: VectorsLike) -> np.ndarray:
    """Crowding distance within one front; boundary rows get +inf."""
    matrix = as_matrix(vectors)
    count = len(matrix)
    distance = np.zeros(count)
    if count <= 2:
        distance[:] = np.inf
        return distance
    for column in matrix.T:
        order = np.argsort(column, kind="stable")
        ordered = column[order]
        distance[order[0]] = distance[order[-1]] = np.inf
        spread = ordered[-1] - ordered[0]
        if spread <= 0:
            continue
        distance[order[1:-1]] += (ordered[2:] - ordered[:-2]) / spread
    return distance


@dataclass
class ParetoArchive:
    """Current non-dominated samples with their estimated objective vectors."""

    sample_ids: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    estimates: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))

    @classmethod
    def from_estimates(cls, sample_ids: Iterable[int], estimates: np.ndarray) -> "ParetoArchive":
        """Keep the non-dominated rows of `estimates`, labelled by `sample_ids`."""
        ids = np.asarray(list(sample_ids), dtype=np.int64)
        matrix = as_matrix(estimates)
        if len(ids) != len(matrix):
            raise DomainError(f"{len(ids)} ids for {len(matrix)} objective vectors")
        if len(matrix) == 0:
            return cls(ids, matrix.reshape(0, matrix.shape[1] if matrix.ndim == 2 else 2))
        mask = front_mask(matrix)
        return cls(ids[mask], matrix[mask])

    @property
    def entries(self) -> list[tuple[int, ObjectiveVector]]:
        return [(int(i), ObjectiveVector(tuple(row))) for i, row in zip(self.sample_ids, self.estimates)]

    def __len__(self) -> int:
        return len(self.sample_ids)

    def __contains__(self, sample_id: int) -> bool:
        return bool(np.any(self.sample_ids == sample_id))
