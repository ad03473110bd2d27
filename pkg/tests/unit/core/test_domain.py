"""Unit tests for domain geometry."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from mopbnb.core.domain import (
    DomainSpec,
    MixedPoint,
    ObjectiveVector,
    RegionStatus,
    Subregion,
    contains,
    dominates,
    normalized_distance,
)
from mopbnb.core.exceptions import DomainError


class TestDomainSpec:
    """Tests for DomainSpec."""

    def test_hypercube(self):
        """Test hypercube builds n continuous dimensions."""
        domain = DomainSpec.hypercube(3, -4.0, 4.0)
        assert domain.n1 == 3
        assert domain.n2 == 0
        assert domain.n == 3
        np.testing.assert_array_equal(domain.span, [8.0, 8.0, 8.0])

    def test_rejects_inverted_bounds(self):
        """Test lower >= upper is rejected for continuous dimensions."""
        with pytest.raises(ValidationError, match="lower < upper"):
            DomainSpec(continuous_bounds=[(1.0, 0.0)])

    def test_rejects_empty_domain(self):
        """Test a domain needs at least one dimension."""
        with pytest.raises(ValidationError, match="at least one dimension"):
            DomainSpec()

    def test_single_value_integer_range_allowed(self):
        """Test an integer range with lower == upper is valid."""
        domain = DomainSpec(integer_bounds=[(3, 3)])
        assert domain.n2 == 1

    def test_normalize(self):
        """Test points are rescaled to the unit cube."""
        domain = DomainSpec.hypercube(2, -4.0, 4.0)
        np.testing.assert_allclose(domain.normalize([[0.0, 4.0], [-4.0, -2.0]]), [[0.5, 1.0], [0.0, 0.25]])

    def test_normalize_zero_width_integer(self):
        """Test a single-value integer dimension normalizes to 0."""
        domain = DomainSpec(continuous_bounds=[(0.0, 2.0)], integer_bounds=[(5, 5)])
        np.testing.assert_allclose(domain.normalize([[1.0, 5.0]]), [[0.5, 0.0]])

    def test_contains_array_mixed(self, mixed_domain):
        """Test membership checks bounds and integrality."""
        points = np.array([[0.5, 2.0], [0.5, 2.5], [1.5, 2.0], [1.0, 4.0]])
        np.testing.assert_array_equal(mixed_domain.contains_array(points), [True, False, False, True])

    def test_contains_array_dimension_mismatch(self, unit_square):
        """Test wrong coordinate counts raise DomainError."""
        with pytest.raises(DomainError, match="expected 2 coordinates"):
            unit_square.contains_array(np.zeros((1, 3)))

    def test_check_array_outside(self, unit_square):
        """Test check_array raises for points outside the domain."""
        with pytest.raises(DomainError, match="outside the domain"):
            unit_square.check_array([[0.5, 1.5]])

    def test_full_box_is_closed(self, unit_square):
        """Test the full box includes the domain's upper face."""
        box = unit_square.full_box()
        assert box.closed_upper == (True, True)
        assert box.contains_array([[1.0, 1.0]])[0]


class TestMixedPoint:
    """Tests for MixedPoint."""

    def test_within(self, mixed_domain):
        """Test building a valid point."""
        point = MixedPoint.within(mixed_domain, continuous=[0.25], integer=[3])
        assert point.n == 2
        np.testing.assert_array_equal(point.to_array(), [0.25, 3.0])

    def test_within_out_of_bounds(self, mixed_domain):
        """Test out-of-bounds coordinates raise DomainError."""
        with pytest.raises(DomainError, match="outside the domain"):
            MixedPoint.within(mixed_domain, continuous=[0.25], integer=[7])

    def test_within_wrong_counts(self, mixed_domain):
        """Test mismatched coordinate counts raise DomainError."""
        with pytest.raises(DomainError, match="coordinates"):
            MixedPoint.within(mixed_domain, continuous=[0.25, 0.5])

    def test_from_array(self):
        """Test splitting a flat array into continuous and integer parts."""
        point = MixedPoint.from_array([0.5, 0.25, 3.0], n1=2)
        assert point.continuous == (0.5, 0.25)
        assert point.integer == (3,)


class TestObjectiveVector:
    """Tests for ObjectiveVector."""

    def test_of(self):
        """Test construction from positional values."""
        v = ObjectiveVector.of(1, 2.5)
        assert v.m == 2
        assert v.values == (1.0, 2.5)
        assert list(v) == [1.0, 2.5]
        assert v[1] == 2.5

    def test_needs_two_entries(self):
        """Test a single objective is rejected."""
        with pytest.raises(DomainError, match="at least two"):
            ObjectiveVector.of(1.0)

    def test_rejects_non_finite(self):
        """Test NaN and infinity are rejected."""
        with pytest.raises(DomainError, match="finite"):
            ObjectiveVector.of(1.0, float("nan"))
        with pytest.raises(DomainError, match="finite"):
            ObjectiveVector.of(float("inf"), 1.0)


class TestBox:
    """Tests for Box splitting, sampling and measure."""

    def test_continuous_split_is_half_open(self, unit_square):
        """Test only the last child keeps the closed upper face."""
        left, right = unit_square.full_box().split(0, 2)
        assert left.lower == (0.0, 0.0) and left.upper == (0.5, 1.0)
        assert right.lower == (0.5, 0.0) and right.upper == (1.0, 1.0)
        assert left.closed_upper == (False, True)
        assert right.closed_upper == (True, True)

        boundary = np.array([[0.5, 0.3]])
        assert not left.contains_array(boundary)[0]
        assert right.contains_array(boundary)[0]

    def test_children_tile_parent(self, unit_square, rng):
        """Test every point of the parent lies in exactly one child."""
        children = unit_square.full_box().split(1, 3)
        points = np.vstack([rng.random((500, 2)), [[0.0, 0.0], [1.0, 1.0], [0.5, 1.0 / 3.0]]])
        membership = np.column_stack([child.contains_array(points) for child in children])
        np.testing.assert_array_equal(membership.sum(axis=1), 1)

    def test_integer_split_uses_contiguous_ranges(self, mixed_domain):
        """Test integer ranges are split into near-equal inclusive ranges."""
        low, high = mixed_domain.full_box().split(1, 2)
        assert (low.lower[1], low.upper[1]) == (0.0, 2.0)
        assert (high.lower[1], high.upper[1]) == (3.0, 4.0)
        assert low.contains_array([[0.5, 2.0]])[0]
        assert not low.contains_array([[0.5, 3.0]])[0]

    def test_integer_split_fewer_values_than_parts(self):
        """Test a range with fewer values than parts yields one child per value."""
        domain = DomainSpec(integer_bounds=[(0, 1)])
        children = domain.full_box().split(0, 3)
        assert [(c.lower[0], c.upper[0]) for c in children] == [(0.0, 0.0), (1.0, 1.0)]

    def test_volume(self, mixed_domain):
        """Test volumes are fractions of the domain and children sum to the parent."""
        box = mixed_domain.full_box()
        assert box.volume(mixed_domain) == pytest.approx(1.0)
        low, high = box.split(1, 2)
        assert low.volume(mixed_domain) == pytest.approx(0.6)
        assert high.volume(mixed_domain) == pytest.approx(0.4)
        halves = low.split(0, 2)
        assert sum(h.volume(mixed_domain) for h in halves) == pytest.approx(0.6)

    def test_sample_uniform(self, mixed_domain, rng):
        """Test samples lie in the box with integral integer coordinates."""
        box = mixed_domain.full_box().split(1, 2)[1]
        points = box.sample_uniform(rng, 200)
        assert points.shape == (200, 2)
        assert box.contains_array(points).all()
        np.testing.assert_array_equal(points[:, 1], np.round(points[:, 1]))
        assert set(points[:, 1].tolist()) == {3.0, 4.0}

    def test_sample_uniform_zero(self, unit_square, rng):
        """Test drawing zero points returns an empty array."""
        assert unit_square.full_box().sample_uniform(rng, 0).shape == (0, 2)


class TestGeometryFunctions:
    """Tests for contains, normalized_distance and dominates."""

    def test_contains(self, unit_square):
        """Test region membership of a point."""
        left, _ = unit_square.full_box().split(0, 2)
        region = Subregion(id=1, box=left)
        assert region.status is RegionStatus.ACTIVE
        assert contains(region, MixedPoint(continuous=(0.25, 1.0)))
        assert not contains(region, MixedPoint(continuous=(0.5, 0.5)))

    def test_contains_dimension_mismatch(self, unit_square):
        """Test a point of the wrong size raises DomainError."""
        region = Subregion(id=0, box=unit_square.full_box())
        with pytest.raises(DomainError):
            contains(region, MixedPoint(continuous=(0.5,)))

    def test_normalized_distance(self):
        """Test distance is measured in unit-cube coordinates."""
        domain = DomainSpec.hypercube(2, -4.0, 4.0)
        a = MixedPoint(continuous=(-4.0, -4.0))
        b = MixedPoint(continuous=(4.0, 4.0))
        assert normalized_distance(a, b, domain) == pytest.approx(math.sqrt(2.0))
        assert normalized_distance(a, a, domain) == 0.0

    def test_normalized_distance_mixed(self, mixed_domain):
        """Test integer coordinates are normalized by their range."""
        a = MixedPoint(continuous=(0.0,), integer=(0,))
        b = MixedPoint(continuous=(0.0,), integer=(2,))
        assert normalized_distance(a, b, mixed_domain) == pytest.approx(0.5)

    @pytest.mark.parametrize(
        "u,v,expected",
        [
            ((1.0, 2.0), (1.0, 3.0), True),
            ((1.0, 2.0), (2.0, 3.0), True),
            ((1.0, 2.0), (1.0, 2.0), False),
            ((1.0, 3.0), (2.0, 2.0), False),
            ((2.0, 3.0), (1.0, 2.0), False),
        ],
    )
    def test_dominates(self, u, v, expected):
        """Test Pareto dominance for minimisation."""
        assert dominates(ObjectiveVector(u), ObjectiveVector(v)) is expected

    def test_dominates_length_mismatch(self):
        """Test vectors of different lengths cannot be compared."""
        with pytest.raises(DomainError, match="cannot compare"):
            dominates(ObjectiveVector.of(1, 2), ObjectiveVector.of(1, 2, 3))

    def test_dominance_is_a_strict_order(self, rng):
        """Test dominance is irreflexive, asymmetric and transitive on random grid vectors."""
        vectors = [ObjectiveVector(tuple(row)) for row in rng.integers(0, 4, size=(40, 3)).astype(float)]
        for u in vectors:
            assert not dominates(u, u)
        for u in vectors:
            for v in vectors:
                if dominates(u, v):
                    assert not dominates(v, u)
                    for w in vectors:
                        if dominates(v, w):
                            assert dominates(u, w)

    def test_normalized_distance_is_a_metric(self, mixed_domain, rng):
        """Test symmetry and the triangle inequality on random mixed triples."""
        for _ in range(200):
            a, b, c = (
                MixedPoint(continuous=(float(rng.random()),), integer=(int(rng.integers(0, 5)),)) for _ in range(3)
            )
            ab = normalized_distance(a, b, mixed_domain)
            assert ab == pytest.approx(normalized_distance(b, a, mixed_domain))
            ac = normalized_distance(a, c, mixed_domain)
            cb = normalized_distance(c, b, mixed_domain)
            assert ab <= ac + cb + 1e-12
