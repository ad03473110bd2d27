"""Objective estimation: shrinking-ball averaging, replication means and schedules."""

import itertools
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from mopbnb.core.domain import DomainSpec, MixedPoint, ObjectiveVector, RegionStatus
from mopbnb.core.exceptions import DomainError
from mopbnb.core.models import Schedules, Variant
from mopbnb.problems.noise import NoisyProblem

logger = logging.getLogger(__name__)

# grid bucketing scans 3^n neighbour cells, beyond this a k-d tree is cheaper
GRID_MAX_DIM = 6
# upper bound on rows passed to one evaluate_batch call
EVAL_CHUNK_ROWS = 1_000_000


def radius(k: int, n: int, s: Schedules) -> float:
    """Ball radius at iteration k, in normalized units.

    The geometric rule r0 / B^(k/n) halves ball volume every iteration; the
    polynomial rule r0 / k^(1/(4n)) shrinks it slowly enough that the number
    of samples per ball around a fixed point keeps growing.
    """
    if s.radius_rule == "polynomial":
        return s.r0 * max(k, 1) ** (-1.0 / (4 * n))
    return s.r0 * s.B ** (-k / n)


def sample_target(k: int, region_status: RegionStatus, alpha_k: float, s: Schedules) -> int:
    """Total number of samples a region should hold at iteration k."""
    if region_status is RegionStatus.PRUNED:
        return k * s.c
    if not 0 < alpha_k < 1:
        raise ValueError(f"alpha_k must lie in (0, 1), got {alpha_k}")
    # rounding absorbs log error so alpha_k = (1 - delta)^t gives exactly t
    return math.ceil(round(math.log(alpha_k) / math.log(1.0 - s.delta), 9))


def replication_schedule(k: int, R1: int, cap: int) -> int:
    """Replications per point at iteration k: R1 doubling each iteration, capped."""
    if R1 < 1 or cap < R1:
        raise ValueError(f"need 1 <= R1 <= cap, got R1={R1}, cap={cap}")
    if k - 1 >= cap.bit_length():
        return cap
    return min(cap, R1 * 2 ** (k - 1))


def theoretical_bound(alpha: float, m: int, variant: Variant, noisy: bool) -> float:
    """Lower bound on the probability that unpruned regions keep a high-quality point."""
    if variant is Variant.WR and noisy:
        return (1.0 - alpha) * (1.0 - m * alpha)
    return 1.0 - alpha


@dataclass(frozen=True)
class Sample:
    id: int
    x: MixedPoint
    raw: ObjectiveVector
    estimate: ObjectiveVector
    born_at: int
    replications: int = 1


class SampleStore:
    """Append-only store of every evaluated point.

    Arrays grow geometrically; the public properties are views of the filled
    part. `raw` holds the single observation (so) or the running replication
    mean (wr).
    """

    def __init__(self, domain: DomainSpec, m: int, capacity: int = 256):
        self.domain = domain
        self.m = m
        self._size = 0
        self._X = np.empty((capacity, domain.n))
        self._Z = np.empty((capacity, domain.n))
        self._raw = np.empty((capacity, m))
        self._sums = np.empty((capacity, m))
        self._estimate = np.empty((capacity, m))
        self._born = np.empty(capacity, dtype=np.int64)
        self._reps = np.empty(capacity, dtype=np.int64)
        self._grid_width: Optional[float] = None

    def __len__(self) -> int:
        return self._size

    def _grow(self, extra: int) -> None:
        needed = self._size + extra
        capacity = len(self._X)
        if needed <= capacity:
            return
        while capacity < needed:
            capacity *= 2
        for name in ("_X", "_Z", "_raw", "_sums", "_estimate", "_born", "_reps"):
            old = getattr(self, name)
            new = np.empty((capacity,) + old.shape[1:], dtype=old.dtype)
            new[: self._size] = old[: self._size]
            setattr(self, name, new)

    def add(self, X: np.ndarray, raw: np.ndarray, born_at: int, replications: int = 1) -> np.ndarray:
        """Append points with their observations; returns the new sample ids."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        raw = np.atleast_2d(np.asarray(raw, dtype=float))
        if X.shape[1] != self.domain.n or raw.shape != (len(X), self.m):
            raise DomainError(f"expected ({len(X)}, {self.domain.n}) points and ({len(X)}, {self.m}) values")
        if not np.all(np.isfinite(raw)):
            raise DomainError("observations must be finite")
        self._grow(len(X))
        ids = np.arange(self._size, self._size + len(X))
        self._X[ids] = X
        self._Z[ids] = self.domain.normalize(X)
        self._raw[ids] = raw
        self._sums[ids] = raw * replications
        self._estimate[ids] = raw
        self._born[ids] = born_at
        self._reps[ids] = replications
        self._size += len(X)
        return ids

    def add_replications(self, ids: np.ndarray, sums: np.ndarray, counts: np.ndarray) -> None:
        """Fold extra replications into the running means of `ids`."""
        self._sums[ids] += sums
        self._reps[ids] += counts
        self._raw[ids] = self._sums[ids] / self._reps[ids, None]

    def set_estimates(self, values: np.ndarray) -> None:
        self._estimate[: self._size] = values

    @property
    def X(self) -> np.ndarray:
        return self._X[: self._size]

    @property
    def Z(self) -> np.ndarray:
        return self._Z[: self._size]

    @property
    def raw(self) -> np.ndarray:
        return self._raw[: self._size]

    @property
    def estimates(self) -> np.ndarray:
        return self._estimate[: self._size]

    @property
    def born_at(self) -> np.ndarray:
        return self._born[: self._size]

    @property
    def replications(self) -> np.ndarray:
        return self._reps[: self._size]

    def sample(self, sample_id: int) -> Sample:
        if not 0 <= sample_id < self._size:
            raise KeyError(sample_id)
        return Sample(
            id=sample_id,
            x=MixedPoint.from_array(self._X[sample_id], self.domain.n1),
            raw=ObjectiveVector(tuple(self._raw[sample_id])),
            estimate=ObjectiveVector(tuple(self._estimate[sample_id])),
            born_at=int(self._born[sample_id]),
            replications=int(self._reps[sample_id]),
        )

    def grid_width(self, r: float) -> float:
        """Cell width for ball queries at radius r; reset to r once r has halved."""
        if self._grid_width is None or r > self._grid_width or r <= self._grid_width / 2:
            self._grid_width = r
        return self._grid_width

    def ball_means(self, queries: np.ndarray, r: float) -> tuple[np.ndarray, np.ndarray]:
        """Mean raw value and count of stored samples within normalized distance r of each query.

        `queries` are normalized coordinates. Rows with an empty ball get NaN means.
        """
        queries = np.atleast_2d(np.asarray(queries, dtype=float))
        if self._size == 0:
            return np.full((len(queries), self.m), np.nan), np.zeros(len(queries), dtype=np.int64)
        if self.domain.n <= GRID_MAX_DIM:
            index: BallIndex = GridBallIndex(self.Z, self.grid_width(r))
            if not index.usable:
                index = TreeBallIndex(self.Z)
        else:
            index = TreeBallIndex(self.Z)
        counts = np.zeros(len(queries), dtype=np.int64)
        sums = np.zeros((len(queries), self.m))
        for qi, si in index.pairs(queries, r):
            counts += np.bincount(qi, minlength=len(queries))
            for obj in range(self.m):
                sums[:, obj] += np.bincount(qi, weights=self.raw[si, obj], minlength=len(queries))
        with np.errstate(invalid="ignore", divide="ignore"):
            means = sums / counts[:, None]
        return means, counts


class BallIndex(ABC):
    @abstractmethod
    def pairs(self, queries: np.ndarray, r: float):
        """Yield (query_index, sample_index) arrays covering every pair within distance r."""


class GridBallIndex(BallIndex):
    """Uniform grid over [0, 1]^n with cell width >= r; exact via a 3^n neighbour scan."""

    def __init__(self, Z: np.ndarray, width: float):
        self.Z = Z
        self.width = width
        self.radix = int(1.0 / width) + 3
        n = Z.shape[1]
        self.usable = n * math.log(self.radix) < 62 * math.log(2)
        if not self.usable:
            return
        self.powers = self.radix ** np.arange(n, dtype=np.int64)
        codes = self._cells(Z) @ self.powers
        self.order = np.argsort(codes, kind="stable")
        self.sorted_codes = codes[self.order]

    def _cells(self, Z: np.ndarray) -> np.ndarray:
        # +1 keeps every neighbour offset non-negative
        return np.floor(Z / self.width).astype(np.int64) + 1

    def pairs(self, queries: np.ndarray, r: float):
        cells = self._cells(queries)
        r2 = r * r
        for offset in itertools.product((-1, 0, 1), repeat=queries.shape[1]):
            codes = (cells + np.asarray(offset, dtype=np.int64)) @ self.powers
            lo = np.searchsorted(self.sorted_codes, codes, side="left")
            hi = np.searchsorted(self.sorted_codes, codes, side="right")
            counts = hi - lo
            total = int(counts.sum())
            if total == 0:
                continue
            qi = np.repeat(np.arange(len(queries)), counts)
            starts = np.repeat(lo - (np.cumsum(counts) - counts), counts)
            si = self.order[starts + np.arange(total)]
            d2 = np.sum((queries[qi] - self.Z[si]) ** 2, axis=1)
            keep = d2 <= r2
            yield qi[keep], si[keep]


class TreeBallIndex(BallIndex):
    """Exact ball queries through a k-d tree."""

    def __init__(self, Z: np.ndarray):
        self.Z = Z
        self.tree = cKDTree(Z)

    def pairs(self, queries: np.ndarray, r: float):
        neighbours = self.tree.query_ball_point(queries, r)
        counts = np.fromiter((len(n) for n in neighbours), dtype=np.int64, count=len(queries))
        if counts.sum() == 0:
            return
        qi = np.repeat(np.arange(len(queries)), counts)
        si = np.concatenate([np.asarray(n, dtype=np.int64) for n in neighbours if n])
        # query_ball_point compares with a rounding tolerance; enforce d <= r exactly
        keep = np.sum((queries[qi] - self.Z[si]) ** 2, axis=1) <= r * r
        yield qi[keep], si[keep]


def estimate_so(q: Sample, store: SampleStore, r_k: float) -> ObjectiveVector:
    """Mean raw observation of every stored sample within r_k of q (q included)."""
    means, counts = store.ball_means(store.Z[[q.id]], r_k)
    if counts[0] == 0:
        raise DomainError(f"sample {q.id} is not in the store")
    return ObjectiveVector(tuple(means[0]))


def estimate_at(x: MixedPoint, store: SampleStore, r: float) -> Optional[ObjectiveVector]:
    """Ball mean around an arbitrary point, or None when no sample is within r."""
    x.check(store.domain)
    means, counts = store.ball_means(store.domain.normalize(x.to_array())[None, :], r)
    if counts[0] == 0:
        return None
    return ObjectiveVector(tuple(means[0]))


def estimate_all(store: SampleStore, r_k: float) -> np.ndarray:
    """Recompute the ball estimate of every stored sample at radius r_k."""
    means, _ = store.ball_means(store.Z, r_k)
    store.set_estimates(means)
    return means


def replicate(problem: NoisyProblem, X: np.ndarray, counts: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Per-row sums of `counts[i]` noisy evaluations at `X[i]`, in row order."""
    counts = np.asarray(counts, dtype=np.int64)
    sums = np.zeros((len(X), problem.m))
    start = 0
    while start < len(X):
        # at least one point per batch, then as many as fit in the row budget
        cum = np.cumsum(counts[start:])
        stop = start + max(1, int(np.searchsorted(cum, EVAL_CHUNK_ROWS, side="right")))
        rows = np.repeat(np.arange(start, stop), counts[start:stop])
        if len(rows):
            values = problem.evaluate_batch(X[rows], rng)
            for obj in range(problem.m):
                sums[start:stop, obj] = np.bincount(rows - start, weights=values[:, obj], minlength=stop - start)
        start = stop
    return sums


def estimate_wr(x: MixedPoint, p: NoisyProblem, R: int, rng: np.random.Generator) -> ObjectiveVector:
    """Mean of R independent observations at x."""
    if R < 1:
        raise ValueError(f"R must be at least 1, got {R}")
    x.check(p.domain)
    sums = replicate(p, x.to_array()[None, :], np.asarray([R]), rng)
    return ObjectiveVector(tuple(sums[0] / R))
