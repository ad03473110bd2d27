"""Geometry of the mixed continuous/integer search space.

Points are stored as flat float arrays with the continuous coordinates first
and the integer coordinates after them. Boxes are half-open along continuous
dimensions, except on the domain's own upper face, and inclusive integer
ranges along integer dimensions, so a set of sibling boxes tiles its parent
exactly.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from mopbnb.core.exceptions import DomainError


class DomainSpec(BaseModel):
    """Box-constrained mixed domain S ⊂ R^n1 × Z^n2."""

    model_config = ConfigDict(frozen=True)

    continuous_bounds: list[tuple[float, float]] = Field(default_factory=list)
    integer_bounds: list[tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_bounds(self) -> "DomainSpec":
        for lo, hi in self.continuous_bounds:
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
                raise ValueError(f"continuous bounds must satisfy lower < upper, got ({lo}, {hi})")
        for lo, hi in self.integer_bounds:
            if lo > hi:
                raise ValueError(f"integer bounds must satisfy lower <= upper, got ({lo}, {hi})")
        if self.n < 1:
            raise ValueError("domain needs at least one dimension")
        return self

    @classmethod
    def hypercube(cls, n: int, lower: float, upper: float) -> "DomainSpec":
        """Continuous domain [lower, upper]^n."""
        return cls(continuous_bounds=[(lower, upper)] * n)

    @property
    def n1(self) -> int:
        return len(self.continuous_bounds)

    @property
    def n2(self) -> int:
        return len(self.integer_bounds)

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def lower(self) -> np.ndarray:
        bounds = [b[0] for b in self.continuous_bounds] + [b[0] for b in self.integer_bounds]
        return np.asarray(bounds, dtype=float)

    @property
    def upper(self) -> np.ndarray:
        bounds = [b[1] for b in self.continuous_bounds] + [b[1] for b in self.integer_bounds]
        return np.asarray(bounds, dtype=float)

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def normalize(self, points: np.ndarray) -> np.ndarray:
        """Affinely rescale every dimension to [0, 1]; zero-width integer dims map to 0."""
        points = np.asarray(points, dtype=float)
        span = self.span
        safe = np.where(span > 0, span, 1.0)
        scaled = (points - self.lower) / safe
        return np.where(span > 0, scaled, 0.0)

    def contains_array(self, points: np.ndarray) -> np.ndarray:
        """Membership mask for rows of `points` (bounds inclusive, integers integral)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.n:
            raise DomainError(f"expected {self.n} coordinates, got {points.shape[1]}")
        inside = np.all((points >= self.lower) & (points <= self.upper), axis=1)
        if self.n2:
            ints = points[:, self.n1 :]
            inside &= np.all(ints == np.round(ints), axis=1)
        return inside

    def check_array(self, points: np.ndarray) -> np.ndarray:
        """Return `points` as a 2-D array, raising DomainError if any row is outside."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if not np.all(self.contains_array(points)):
            raise DomainError("point outside the domain")
        return points

    def full_box(self) -> "Box":
        return Box(
            lower=tuple(self.lower.tolist()),
            upper=tuple(self.upper.tolist()),
            closed_upper=(True,) * self.n,
            n1=self.n1,
        )


@dataclass(frozen=True)
class MixedPoint:
    """A candidate solution with continuous and integer coordinates."""

    continuous: tuple[float, ...] = ()
    integer: tuple[int, ...] = ()

    @classmethod
    def from_array(cls, values: Sequence[float], n1: int) -> "MixedPoint":
        values = list(values)
        return cls(
            continuous=tuple(float(v) for v in values[:n1]),
            integer=tuple(int(round(v)) for v in values[n1:]),
        )

    @classmethod
    def within(cls, domain: DomainSpec, continuous: Sequence[float] = (), integer: Sequence[int] = ()) -> "MixedPoint":
        """Build a point, checking dimension counts and bounds against `domain`."""
        point = cls(tuple(float(v) for v in continuous), tuple(int(v) for v in integer))
        point.check(domain)
        return point

    @property
    def n(self) -> int:
        return len(self.continuous) + len(self.integer)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.continuous + tuple(float(v) for v in self.integer), dtype=float)

    def check(self, domain: DomainSpec) -> None:
        if len(self.continuous) != domain.n1 or len(self.integer) != domain.n2:
            raise DomainError(
                f"point has ({len(self.continuous)}, {len(self.integer)}) coordinates, "
                f"domain expects ({domain.n1}, {domain.n2})"
            )
        if not domain.contains_array(self.to_array())[0]:
            raise DomainError(f"point {self} lies outside the domain")


@dataclass(frozen=True)
class ObjectiveVector:
    """Finite vector of m ≥ 2 objective values (true or estimated)."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        if len(values) < 2:
            raise DomainError(f"objective vectors need at least two entries, got {len(values)}")
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"objective vector must be finite, got {values}")
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, *values: float) -> "ObjectiveVector":
        return cls(tuple(values))

    @property
    def m(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, index: int) -> float:
        return self.values[index]


@dataclass(frozen=True)
class Box:
    """Axis-aligned box over the mixed domain.

    `closed_upper[d]` marks continuous dimensions whose upper face is the
    domain's upper face; integer dimensions are always inclusive ranges.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    closed_upper: tuple[bool, ...]
    n1: int

    @property
    def n(self) -> int:
        return len(self.lower)

    def contains_array(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.n:
            raise DomainError(f"expected {self.n} coordinates, got {points.shape[1]}")
        lower = np.asarray(self.lower)
        upper = np.asarray(self.upper)
        closed = np.asarray(self.closed_upper, dtype=bool)
        below_upper = np.where(closed, points <= upper, points < upper)
        return np.all((points >= lower) & below_upper, axis=1)

    def normalized_widths(self, domain: DomainSpec) -> np.ndarray:
        span = domain.span
        widths = np.asarray(self.upper) - np.asarray(self.lower)
        safe = np.where(span > 0, span, 1.0)
        return np.where(span > 0, widths / safe, 0.0)

    def integer_counts(self) -> np.ndarray:
        lower = np.asarray(self.lower[self.n1 :])
        upper = np.asarray(self.upper[self.n1 :])
        return (upper - lower + 1).astype(int)

    def volume(self, domain: DomainSpec) -> float:
        """Fraction of the domain (Lebesgue × counting measure) covered by the box."""
        widths = self.normalized_widths(domain)[: self.n1]
        counts = self.integer_counts()
        totals = np.asarray([hi - lo + 1 for lo, hi in domain.integer_bounds], dtype=float)
        return float(np.prod(widths) * np.prod(counts / totals if len(totals) else 1.0))

    def sample_uniform(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw `count` i.i.d. uniform points (uniform reals, uniform integers)."""
        out = np.empty((count, self.n), dtype=float)
        if count == 0:
            return out
        lower = np.asarray(self.lower)
        upper = np.asarray(self.upper)
        if self.n1:
            u = rng.random((count, self.n1))
            out[:, : self.n1] = lower[: self.n1] + u * (upper[: self.n1] - lower[: self.n1])
        if self.n > self.n1:
            out[:, self.n1 :] = rng.integers(
                lower[self.n1 :].astype(np.int64),
                upper[self.n1 :].astype(np.int64) + 1,
                size=(count, self.n - self.n1),
            )
        return out

    def split(self, dim: int, parts: int) -> list["Box"]:
        """Split along `dim` into `parts` equal-measure pieces (as equal as possible for integers)."""
        lo, hi = self.lower[dim], self.upper[dim]
        pieces: list[tuple[float, float, bool]] = []
        if dim < self.n1:
            for j in range(parts):
                left = lo + (hi - lo) * j / parts
                right = hi if j == parts - 1 else lo + (hi - lo) * (j + 1) / parts
                closed = self.closed_upper[dim] if j == parts - 1 else False
                pieces.append((left, right, closed))
        else:
            values = np.arange(int(lo), int(hi) + 1)
            for chunk in np.array_split(values, min(parts, len(values))):
                pieces.append((float(chunk[0]), float(chunk[-1]), True))
        children = []
        for left, right, closed in pieces:
            lower = list(self.lower)
            upper = list(self.upper)
            flags = list(self.closed_upper)
            lower[dim], upper[dim], flags[dim] = left, right, closed
            children.append(Box(tuple(lower), tuple(upper), tuple(flags), self.n1))
        return children


class RegionStatus(str, Enum):
    ACTIVE = "active"
    PRUNED = "pruned"


@dataclass
class Subregion:
    """A box of the current partition with its classification and samples."""

    id: int
    box: Box
    parent_id: Optional[int] = None
    status: RegionStatus = RegionStatus.ACTIVE
    pruned_at: Optional[int] = None
    sample_ids: list[int] = field(default_factory=list)

    @property
    def is_pruned(self) -> bool:
        return self.status is RegionStatus.PRUNED


def contains(region: Subregion, x: MixedPoint) -> bool:
    """True iff `x` lies in the region's intervals/ranges."""
    if x.n != region.box.n or len(x.continuous) != region.box.n1:
        raise DomainError(f"point has {x.n} coordinates, region has {region.box.n}")
    return bool(region.box.contains_array(x.to_array())[0])


def normalized_distance(a: MixedPoint, b: MixedPoint, d: DomainSpec) -> float:
    """Euclidean distance after rescaling every dimension to [0, 1]."""
    if a.n != d.n or b.n != d.n or len(a.continuous) != d.n1 or len(b.continuous) != d.n1:
        raise DomainError(f"points must have {d.n1} continuous and {d.n2} integer coordinates")
    diff = d.normalize(a.to_array()) - d.normalize(b.to_array())
    return float(np.sqrt(np.sum(diff * diff)))


def dominates(u: ObjectiveVector, v: ObjectiveVector) -> bool:
    """Pareto dominance for minimisation."""
    if len(u) != len(v):
        raise DomainError(f"cannot compare vectors of length {len(u)} and {len(v)}")
    a, b = u.as_array(), v.as_array()
    return bool(np.all(a <= b) and np.any(a < b))
