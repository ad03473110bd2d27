"""Unit tests for the multiplicative noise wrapper."""

import numpy as np
import pytest

from mopbnb.core.domain import MixedPoint
from mopbnb.core.models import NoiseSpec
from mopbnb.problems.functions import ZDT1
from mopbnb.problems.noise import MultiplicativeNoiseProblem, NoisyProblem, with_noise


class TestMultiplicativeNoiseProblem:
    """Tests for MultiplicativeNoiseProblem."""

    @pytest.fixture
    def X(self) -> np.ndarray:
        """Points with strictly positive objective values."""
        return np.array([[0.25, 0.5], [0.5, 0.1], [0.9, 0.9]])

    def test_satisfies_protocol(self, zdt1_noisy):
        """Test the wrapper is a NoisyProblem."""
        assert isinstance(zdt1_noisy, NoisyProblem)
        assert zdt1_noisy.m == 2
        assert zdt1_noisy.problem_id == "zdt1"

    def test_noise_free(self, zdt1_exact, X, rng):
        """Test sigma = 0 returns the true values."""
        assert zdt1_exact.noise_free
        np.testing.assert_array_equal(zdt1_exact.evaluate_batch(X, rng), zdt1_exact.true_values_batch(X))

    def test_shared_draw(self, zdt1_noisy, X, rng):
        """Test one shared draw scales every objective by the same factor."""
        ratio = zdt1_noisy.evaluate_batch(X, rng) / zdt1_noisy.true_values_batch(X)
        np.testing.assert_allclose(ratio[:, 0], ratio[:, 1])
        assert not np.allclose(ratio, 1.0)

    def test_independent_draws(self, X, rng):
        """Test independent noise gives each objective its own factor."""
        problem = with_noise(ZDT1(2), NoiseSpec(sigma=0.1, shared=False))
        ratio = problem.evaluate_batch(X, rng) / problem.true_values_batch(X)
        assert not np.allclose(ratio[:, 0], ratio[:, 1])

    def test_mean_is_unbiased(self, zdt1_noisy, rng):
        """Test the noise has mean zero in relative terms."""
        X = np.repeat([[0.25, 0.5]], 20_000, axis=0)
        values = zdt1_noisy.evaluate_batch(X, rng)
        expected = zdt1_noisy.true_values_batch(X[:1])[0]
        np.testing.assert_allclose(values.mean(axis=0), expected, rtol=0.01)
        relative_std = (values[:, 0] / expected[0]).std()
        assert relative_std == pytest.approx(0.1, rel=0.05)

    def test_same_seed_same_draws(self, zdt1_noisy, X):
        """Test evaluation is reproducible from the generator state."""
        first = zdt1_noisy.evaluate_batch(X, np.random.default_rng(5))
        second = zdt1_noisy.evaluate_batch(X, np.random.default_rng(5))
        np.testing.assert_array_equal(first, second)

    def test_evaluate_once(self, zdt1_exact, rng):
        """Test single-point evaluation returns an ObjectiveVector."""
        value = zdt1_exact.evaluate_once(MixedPoint(continuous=(0.25, 0.0)), rng)
        assert value.values == pytest.approx((0.25, 0.5))

    def test_true_values(self, zdt1_noisy):
        """Test true values bypass the noise."""
        assert zdt1_noisy.true_values(MixedPoint(continuous=(0.25, 0.0))).values == pytest.approx((0.25, 0.5))

    def test_repr(self):
        """Test the repr names the base function and noise."""
        problem = MultiplicativeNoiseProblem(ZDT1(2), NoiseSpec(sigma=0.2, shared=False))
        assert repr(problem) == "ZDT1(n=2) with sigma=0.2 (independent)"
