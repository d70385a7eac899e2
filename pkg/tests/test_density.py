"""
Unit tests for the mixing-field density

Tests the tree polynomial routes, the log-density, shift covariance, the
Radon-Nikodym ratio and the tilted-weight bound.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vrjp_lab.deformation.harmonic import solve_harmonic
from vrjp_lab.field.arborescence import arborescence_law, enumerate_arborescences, tree_polynomial_enumerated
from vrjp_lab.field.density import (
    log_density,
    log_density_batch,
    log_tree_polynomial_derivatives,
    rn_ratio,
    tilted_weights,
    tree_polynomial,
    tree_polynomial_batch,
    tree_polynomial_cholesky,
    tree_polynomial_ratio_bound,
)
from vrjp_lab.field.sample import FieldSample
from vrjp_lab.framework.errors import FieldOverflowError, HypothesisViolation, PinningError
from vrjp_lab.graph.io import path, random_connected, two_vertex


class TestTreePolynomial:
    """Test ln D by determinant, Cholesky and enumeration."""

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.1, 10.0), st.floats(-5.0, 5.0))
    def test_two_vertex_closed_form(self, w, x):
        """ln D = ln W - x on a single edge."""
        assert math.isclose(tree_polynomial(two_vertex(w), [0.0, x]), math.log(w) - x, abs_tol=1e-12)

    def test_triangle_at_zero(self, k3):
        """Three spanning trees of K₃."""
        assert math.isclose(tree_polynomial(k3, np.zeros(3)), math.log(3.0), abs_tol=1e-12)
        assert len(enumerate_arborescences(k3, np.zeros(3))) == 3

    def test_routes_agree(self, small_graphs, pinned_field):
        """Determinant, Cholesky and enumeration give the same ln D."""
        for g in small_graphs:
            u = pinned_field(g)
            expected = tree_polynomial_enumerated(g, u)
            scale = max(1.0, abs(expected))
            assert abs(tree_polynomial(g, u) - expected) <= 1e-10 * scale
            assert abs(tree_polynomial_cholesky(g, u) - expected) <= 1e-10 * scale

    def test_large_gradients(self, k3):
        """Fields whose arc weights differ by e^80 keep ln D exact."""
        expected = -40.0 + math.log(2.0 + math.exp(-40.0))
        assert math.isclose(tree_polynomial(k3, [0.0, 40.0, 40.0]), expected, rel_tol=1e-13)
        assert math.isclose(tree_polynomial(path(3), [0.0, -40.0, 40.0]), -40.0, rel_tol=1e-13)
        U = np.array([[0.0, 40.0, 40.0], [0.0, 0.0, 0.0], [0.0, -300.0, 300.0]])
        np.testing.assert_allclose(
            tree_polynomial_batch(k3, U), [tree_polynomial_enumerated(k3, u) for u in U], rtol=1e-12
        )

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 5), st.integers(0, 2**32 - 1), st.floats(1.0, 100.0))
    def test_positive_and_finite_for_wide_fields(self, n, seed, scale):
        """ln D is finite and matches enumeration for fields far from zero."""
        rng = np.random.default_rng(seed)
        g = random_connected(n, rng)
        u = FieldSample.from_free(g, rng.uniform(-scale, scale, n - 1))
        value = tree_polynomial(g, u)
        expected = tree_polynomial_enumerated(g, u)
        assert math.isfinite(value)
        assert abs(value - expected) <= 1e-10 * max(1.0, abs(expected))

    def test_batch_matches_single(self, box1, pinned_field):
        """Row-wise ln D equals the single-field evaluation."""
        U = np.stack([pinned_field(box1, 0.5) for _ in range(4)])
        expected = [tree_polynomial(box1, u) for u in U]
        np.testing.assert_allclose(tree_polynomial_batch(box1, U), expected, rtol=1e-12)

    def test_arborescences_valid(self, small_graphs, pinned_field):
        """Every enumerated arborescence points toward the root."""
        g = small_graphs[-1]
        assert all(tree.is_valid(g) for tree in enumerate_arborescences(g, pinned_field(g)))

    def test_overflow_raises(self):
        """A gradient beyond the double-precision range is refused."""
        with pytest.raises(FieldOverflowError):
            tree_polynomial(two_vertex(), [0.0, 800.0])


class TestLogDensity:
    """Test the normalised log-density."""

    def test_two_vertex_at_zero(self, edge):
        """At u = 0 only the Gaussian constant remains."""
        assert math.isclose(log_density(edge, [0.0, 0.0]), -0.5 * math.log(2.0 * math.pi), abs_tol=1e-14)

    def test_pinning_enforced(self, edge):
        """Fields must vanish at the root."""
        with pytest.raises(PinningError):
            log_density(edge, [1.0, 0.0])
        with pytest.raises(PinningError):
            FieldSample(np.array([0.5, 0.0]), root=0)

    def test_field_sample_accepted(self, k3):
        """A FieldSample and its array give the same value."""
        sample = FieldSample.from_free(k3, [0.3, -0.2])
        assert log_density(k3, sample) == log_density(k3, sample.values)

    def test_batch_matches_single(self, box1, pinned_field):
        """The vectorised form equals the loop."""
        U = np.stack([pinned_field(box1, 0.5) for _ in range(3)])
        np.testing.assert_allclose(log_density_batch(box1, U), [log_density(box1, u) for u in U], rtol=1e-12)

    def test_shift_covariance(self, small_graphs, pinned_field):
        """ln q_{j₀}(u - u_{j₀}) = ln q_{i₀}(u) + u_{j₀} for every vertex j₀."""
        for g in small_graphs:
            u = pinned_field(g)
            for j0 in range(1, g.n_vertices):
                shifted = g.with_root(j0)
                lhs = log_density(shifted, u - u[j0])
                assert abs(lhs - (log_density(g, u) + u[j0])) <= 1e-10 * max(1.0, abs(lhs))


class TestTilt:
    """Test the Radon-Nikodym ratio and the tilted-weight bound."""

    def test_rn_ratio_matches_density_difference(self, small_graphs, pinned_field, rng):
        """ln dQ/dQ^γ(u) = ln q(u) - ln q(u + γv)."""
        for g in small_graphs:
            u, v = pinned_field(g), pinned_field(g)
            gamma = float(rng.uniform(-0.5, 0.5))
            expected = log_density(g, u) - log_density(g, u + gamma * v)
            assert abs(rn_ratio(g, u, v, gamma) - expected) <= 1e-10 * max(1.0, abs(expected))

    def test_rn_ratio_vanishes_at_zero(self, k3):
        """No tilt, no ratio."""
        assert rn_ratio(k3, [0.0, 1.0, -1.0], [0.0, 1.0, 1.0], 0.0) == 0.0

    def test_derivatives_match_arborescence_law(self, small_graphs, pinned_field):
        """d/dγ ln D is the mean, d²/dγ² the variance of Σ_T ∇v."""
        for g in small_graphs:
            u, v = pinned_field(g), pinned_field(g)
            first, second = log_tree_polynomial_derivatives(g, u, v)
            law = arborescence_law(g, u, v)
            assert abs(first - law.mean) <= 1e-9 * max(1.0, abs(law.mean))
            assert abs(second - law.variance) <= 1e-9 * max(1.0, law.variance)
            assert second >= -1e-12

    def test_tilted_weights_half_bound(self):
        """Under q²γ|∇v| ≤ ½ every tilted weight keeps at least half its value."""
        g = path(3)
        v = solve_harmonic(g, 0, 2)
        q = 2.0
        gamma = 0.5 / (q**2 * 0.5)
        tilted = tilted_weights(g, v, q, gamma)
        assert tilted.satisfies_half_bound
        assert tilted.min_ratio >= 0.5

    def test_tilted_weights_refused_when_nonpositive(self):
        """Weights driven to zero or below cannot form a graph."""
        g = path(3)
        tilted = tilted_weights(g, [0.0, 0.5, 1.0], 2.0, 2.0)
        with pytest.raises(HypothesisViolation):
            tilted.graph(g)

    def test_ratio_bound_holds(self, k3, pinned_field):
        """D(W,u)/D(W̃,u) stays below the product and exponential bounds."""
        v = solve_harmonic(k3, 0, 1)
        q = 2.0
        gamma = 0.5 / (q**2 * float(np.max(np.abs(v))))
        for _ in range(5):
            bound = tree_polynomial_ratio_bound(k3, pinned_field(k3), v, q, gamma)
            assert bound.holds
            assert bound.log_ratio >= 0.0
