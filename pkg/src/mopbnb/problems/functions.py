"""Deterministic bi-objective test functions (ZDT1, ZDT2, ZDT3, Fonseca-Fleming).

All evaluators are vectorised over rows: `values(X)` takes an (N, n) array and
returns an (N, 2) array of objective values.
"""

import math
from abc import ABC, abstractmethod
from typing import Sequence, Union

import numpy as np

from mopbnb.core.domain import DomainSpec, MixedPoint, ObjectiveVector
from mopbnb.core.exceptions import ConfigError, DomainError
from mopbnb.core.pareto import front_mask

PointLike = Union[MixedPoint, Sequence[float], np.ndarray]


class TestFunction(ABC):
    """A deterministic benchmark function with a known efficient frontier."""

    __test__ = False  # not a pytest class

    problem_id: str = ""
    m: int = 2

    def __init__(self, n: int):
        if n < 2:
            raise ConfigError(f"{self.problem_id} needs at least 2 variables, got {n}")
        self.n = n
        self.domain = self._make_domain(n)

    @abstractmethod
    def _make_domain(self, n: int) -> DomainSpec: ...

    @abstractmethod
    def _values(self, X: np.ndarray) -> np.ndarray: ...

    def values(self, X: np.ndarray) -> np.ndarray:
        """Objective values for every row of `X`; rows must lie in the domain."""
        return self._values(self.domain.check_array(X))

    def __call__(self, x: PointLike) -> ObjectiveVector:
        if isinstance(x, MixedPoint):
            x.check(self.domain)
            x = x.to_array()
        return ObjectiveVector(tuple(self.values(np.asarray(x, dtype=float))[0]))

    @abstractmethod
    def frontier(self, resolution: int) -> np.ndarray:
        """(resolution', 2) array of frontier points, non-dominated within itself."""

    @abstractmethod
    def pareto_set_intersects(self, lower: Sequence[float], upper: Sequence[float], tol: float = 0.0) -> bool:
        """Whether the box [lower, upper] meets the true Pareto set (inflated by `tol`)."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"


class _ZDT(TestFunction):
    def _make_domain(self, n: int) -> DomainSpec:
        return DomainSpec.hypercube(n, 0.0, 1.0)

    @abstractmethod
    def _h(self, f1: np.ndarray, g: np.ndarray) -> np.ndarray: ...

    def _values(self, X: np.ndarray) -> np.ndarray:
        f1 = X[:, 0]
        g = 1.0 + 9.0 * X[:, 1:].sum(axis=1) / (self.n - 1)
        return np.column_stack([f1, g * self._h(f1, g)])

    def frontier(self, resolution: int) -> np.ndarray:
        if resolution < 2:
            raise ConfigError(f"frontier resolution must be at least 2, got {resolution}")
        f1 = np.linspace(0.0, 1.0, resolution)
        points = np.column_stack([f1, self._h(f1, np.ones_like(f1))])
        return points

    def pareto_set_intersects(self, lower: Sequence[float], upper: Sequence[float], tol: float = 0.0) -> bool:
        # Pareto set is x_2 = ... = x_n = 0
        return bool(np.all(np.asarray(lower[1 : self.n], dtype=float) <= tol))


class ZDT1(_ZDT):
    """Convex frontier f2 = 1 - sqrt(f1)."""

    problem_id = "zdt1"

    def _h(self, f1, g):
        return 1.0 - np.sqrt(f1 / g)


class ZDT2(_ZDT):
    """Concave frontier f2 = 1 - f1^2."""

    problem_id = "zdt2"

    def _h(self, f1, g):
        return 1.0 - (f1 / g) ** 2


class ZDT3(_ZDT):
    """Disconnected frontier; the g = 1 curve is filtered to its non-dominated part."""

    problem_id = "zdt3"

    def _h(self, f1, g):
        return 1.0 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10.0 * np.pi * f1)

    def frontier(self, resolution: int) -> np.ndarray:
        points = super().frontier(resolution)
        return points[front_mask(points)]


class FonsecaFleming(TestFunction):
    """Non-convex frontier; Pareto set is the diagonal x_i = t, |t| <= 1/sqrt(n)."""

    problem_id = "ff"

    def _make_domain(self, n: int) -> DomainSpec:
        return DomainSpec.hypercube(n, -4.0, 4.0)

    def _values(self, X: np.ndarray) -> np.ndarray:
        shift = 1.0 / math.sqrt(self.n)
        f1 = 1.0 - np.exp(-np.sum((X - shift) ** 2, axis=1))
        f2 = 1.0 - np.exp(-np.sum((X + shift) ** 2, axis=1))
        return np.column_stack([f1, f2])

    def frontier(self, resolution: int) -> np.ndarray:
        if resolution < 2:
            raise ConfigError(f"frontier resolution must be at least 2, got {resolution}")
        bound = 1.0 / math.sqrt(self.n)
        t = np.linspace(-bound, bound, resolution)
        return self._values(np.repeat(t[:, None], self.n, axis=1))

    def pareto_set_intersects(self, lower: Sequence[float], upper: Sequence[float], tol: float = 0.0) -> bool:
        bound = 1.0 / math.sqrt(self.n)
        lo = max(float(np.max(lower)), -bound)
        hi = min(float(np.min(upper)), bound)
        return lo <= hi + tol


def _evaluate(function: type[TestFunction], x: PointLike) -> ObjectiveVector:
    values = x.to_array() if isinstance(x, MixedPoint) else np.asarray(x, dtype=float)
    if values.ndim != 1:
        raise DomainError(f"expected a single point, got shape {values.shape}")
    return function(len(values))(values)


def zdt1(x: PointLike) -> ObjectiveVector:
    return _evaluate(ZDT1, x)


def zdt2(x: PointLike) -> ObjectiveVector:
    return _evaluate(ZDT2, x)


def zdt3(x: PointLike) -> ObjectiveVector:
    return _evaluate(ZDT3, x)


def ff(x: PointLike) -> ObjectiveVector:
    return _evaluate(FonsecaFleming, x)
