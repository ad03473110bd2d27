"""Noisy-problem contract and the multiplicative Gaussian noise wrapper."""

from typing import Protocol, runtime_checkable

import numpy as np

from mopbnb.core.domain import DomainSpec, MixedPoint, ObjectiveVector
from mopbnb.core.models import NoiseSpec
from mopbnb.problems.functions import TestFunction


@runtime_checkable
class NoisyProblem(Protocol):
    """What an optimizer may see of a problem.

    `true_values*` exist for benchmark problems only; metrics and tests call
    them, optimizers never do.
    """

    problem_id: str
    domain: DomainSpec
    m: int
    noise_free: bool

    def evaluate_once(self, x: MixedPoint, rng: np.random.Generator) -> ObjectiveVector: ...

    def evaluate_batch(self, X: np.ndarray, rng: np.random.Generator) -> np.ndarray: ...

    def true_values(self, x: MixedPoint) -> ObjectiveVector: ...

    def true_values_batch(self, X: np.ndarray) -> np.ndarray: ...


class MultiplicativeNoiseProblem:
    """g(x, xi) = f0(x) (1 + xi), xi ~ N(0, sigma^2).

    One draw per evaluation is shared by every objective unless
    `noise.shared` is False, in which case each objective gets its own draw.
    """

    def __init__(self, base: TestFunction, noise: NoiseSpec):
        self.base = base
        self.noise = noise
        self.problem_id = base.problem_id
        self.domain = base.domain
        self.m = base.m

    @property
    def noise_free(self) -> bool:
        return self.noise.sigma == 0

    def _draws(self, count: int, rng: np.random.Generator) -> np.ndarray:
        shape = (count, 1) if self.noise.shared else (count, self.m)
        return self.noise.sigma * rng.standard_normal(shape)

    def evaluate_batch(self, X: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """One noisy observation per row of `X`, drawn in row order."""
        f0 = self.base.values(X)
        return f0 * (1.0 + self._draws(len(f0), rng))

    def evaluate_once(self, x: MixedPoint, rng: np.random.Generator) -> ObjectiveVector:
        x.check(self.domain)
        return ObjectiveVector(tuple(self.evaluate_batch(x.to_array()[None, :], rng)[0]))

    def true_values_batch(self, X: np.ndarray) -> np.ndarray:
        return self.base.values(X)

    def true_values(self, x: MixedPoint) -> ObjectiveVector:
        return self.base(x)

    def __repr__(self) -> str:
        return f"{self.base!r} with sigma={self.noise.sigma} ({'shared' if self.noise.shared else 'independent'})"


def with_noise(base: TestFunction, noise: NoiseSpec) -> MultiplicativeNoiseProblem:
    return MultiplicativeNoiseProblem(base, noise)
