"""
Unit tests for harmonic deformations, plan constants and the moment bounds
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vrjp_lab.deformation.bounds import (
    classify,
    convexity_check,
    holder_combination_check,
    lemma1_bound,
    lemma1_bound_check,
    lemma1_log_bound,
    taylor_grid_scan,
    taylor_remainder_check,
)
from vrjp_lab.deformation.harmonic import (
    current_flow_bound_check,
    effective_resistance,
    harmonic_report,
    inf_norm,
    nash_williams_sum,
    resistance_monotonicity_scan,
    solve_harmonic,
)
from vrjp_lab.deformation.plan import ASYMPTOTIC_C0, build_plan, conjugate_exponent, gamma_tilde_optimum
from vrjp_lab.framework.errors import HypothesisViolation
from vrjp_lab.framework.report.models import FAIL, INCONCLUSIVE, PASS
from vrjp_lab.graph.core import build_z2_box
from vrjp_lab.graph.io import cycle, path
from vrjp_lab.sampler.estimate import MomentEstimate


class TestHarmonic:
    """Test the harmonic potential and effective resistance."""

    @pytest.mark.parametrize("method", ["direct", "cg", "dense"])
    def test_path_potential(self, method):
        """Linear interpolation along a path."""
        np.testing.assert_allclose(solve_harmonic(path(3), 0, 2, method), [0.0, 0.5, 1.0], atol=1e-12)

    def test_cycle_resistance(self):
        """Two parallel paths of length two."""
        assert math.isclose(effective_resistance(cycle(4), 0, 2), 1.0, rel_tol=1e-12)
        assert math.isclose(current_flow_bound_check(cycle(4), 0, 2), 0.5, rel_tol=1e-12)

    def test_path_flow(self):
        """A unit current through a path carries 1 on every edge."""
        assert math.isclose(current_flow_bound_check(path(3), 0, 2), 1.0, rel_tol=1e-12)

    def test_same_endpoints_refused(self):
        """Source and target must differ."""
        with pytest.raises(ValueError):
            solve_harmonic(path(3), 1, 1)

    def test_box_diagnostics(self):
        """Harmonic away from the endpoints, unit current, routes and reciprocity agree."""
        box = build_z2_box(3)
        report = harmonic_report(box, (0, 0), (2, 0))
        assert report.interior_residual <= 1e-10
        assert report.divergence_error <= 1e-8
        assert math.isclose(report.energy * report.resistance, 1.0, rel_tol=1e-14)
        for method in ("cg", "dense"):
            assert math.isclose(effective_resistance(box, (0, 0), (2, 0), method), report.resistance, rel_tol=1e-10)
        assert math.isclose(effective_resistance(box, (2, 0), (0, 0)), report.resistance, rel_tol=1e-10)
        assert current_flow_bound_check(box, (0, 0), (2, 0)) <= 1.0 + 1e-8

    @pytest.mark.parametrize("y", [(2, 0), (3, 0), (2, 2)])
    def test_nash_williams_lower_bound(self, y):
        """R(0, y) dominates the annulus sum."""
        box = build_z2_box(4)
        assert effective_resistance(box, (0, 0), y) >= nash_williams_sum(inf_norm(y))

    def test_nash_williams_values(self):
        """Closed forms for |y|_∞ = 2 and 3; |y|_∞ = 1 is refused."""
        assert math.isclose(nash_williams_sum(2), 1.0 / 12.0)
        assert math.isclose(nash_williams_sum(3), 2.0 / 15.0)
        with pytest.raises(ValueError):
            nash_williams_sum(1)

    def test_inf_norm(self):
        """Lattice sites only."""
        assert inf_norm((3, -4)) == 4
        with pytest.raises(ValueError):
            inf_norm(1)

    def test_monotone_in_radius(self):
        """R(0, y) does not decrease as the box grows; too-small boxes are skipped."""
        scan = resistance_monotonicity_scan((2, 0), [1, 2, 3, 4])
        assert scan.radii == (2, 3, 4)
        assert scan.nondecreasing


class TestPlan:
    """Test the deformation plan and its constants."""

    def test_constants_at_half(self):
        """s = ½, W̄ = 1: q = 2, γ̃ = 1/64, η = c₀/256."""
        box = build_z2_box(3)
        plan = build_plan(box, (2, 0), 0.5, 1.0)
        assert plan.q == 2.0
        assert math.isclose(plan.gamma_tilde, 1.0 / 64.0)
        assert math.isclose(plan.gamma, plan.gamma_tilde * plan.resistance)
        assert math.isclose(plan.gamma_prime, -plan.gamma)
        assert math.isclose(plan.eta_asymptotic, ASYMPTOTIC_C0 / 256.0)
        assert plan.problems(box) == []
        assert 0.0 < plan.instance_bound < 1.0
        assert math.isclose(plan.polynomial_bound, 2.0 ** (-plan.eta_instance))

    def test_lemma_bound_below_instance_bound(self):
        """At the planned γ the deformation bound is at most exp(-R s²/(8q²(W̄+1)))."""
        box = build_z2_box(3)
        for y in [(1, 0), (2, 0), (3, 3)]:
            plan = build_plan(box, y, 0.5, 1.0)
            assert lemma1_bound(box, plan.v, plan.s, plan.gamma) <= plan.instance_bound * (1.0 + 1e-12)

    def test_wbar_must_dominate(self):
        """W̄ below the largest lattice conductance is refused."""
        with pytest.raises(ValueError):
            build_plan(build_z2_box(2, wh=2.0), (1, 0), 0.5, 1.0)

    def test_root_target_refused(self, box2):
        """y = 0 has no deformation."""
        with pytest.raises(ValueError):
            build_plan(box2, (0, 0), 0.5, 1.0)

    def test_conjugate_exponent(self):
        """s + 1/q = 1 on (0, 1) only."""
        assert math.isclose(0.25 + 1.0 / conjugate_exponent(0.25), 1.0)
        with pytest.raises(ValueError):
            conjugate_exponent(1.0)

    def test_gamma_tilde_optimum(self):
        """The grid maximiser sits next to the closed form."""
        grid, closed = gamma_tilde_optimum(0.5, 1.0)
        assert math.isclose(closed, 1.0 / 64.0)
        assert abs(grid - closed) <= 1.0 / (8.0 * 100_000)


class TestBounds:
    """Test the Taylor, convexity and deformation bounds."""

    @settings(max_examples=200, deadline=None)
    @given(st.floats(1.01, 10.0), st.floats(-1.0, 1.0), st.floats(0.0, 0.5))
    def test_taylor_remainder(self, q, t, x):
        """The quadratic remainder bound holds on q²γ|t| ≤ ½."""
        gamma = x / (q**2 * abs(t)) if abs(t) > 1e-9 else 1.0
        assert taylor_remainder_check(q, gamma, t)

    def test_taylor_outside_region(self):
        """No claim outside q²γ|t| ≤ ½."""
        with pytest.raises(HypothesisViolation):
            taylor_remainder_check(2.0, 1.0, 0.2)

    def test_taylor_grid(self):
        """A coarse grid scan finds no violation and a ratio at most one."""
        scan = taylor_grid_scan(np.linspace(1.1, 10.0, 10), n_points=41)
        assert scan.n_violations == 0
        assert scan.n_points == 410
        assert scan.max_ratio <= 1.0

    def test_convexity(self, small_graphs, pinned_field):
        """ln D is convex along lines, with curvature equal to the arborescence variance."""
        for g in small_graphs:
            result = convexity_check(g, pinned_field(g), pinned_field(g), np.linspace(-1.0, 1.0, 5))
            assert result.convex
            assert result.variance_error <= 1e-4

    def test_holder_combination(self, small_graphs, pinned_field):
        """The weighted combination at γ and γ′ is nonnegative."""
        for g in small_graphs:
            assert holder_combination_check(g, pinned_field(g), pinned_field(g), 2.0, 0.3) >= -1e-10

    def test_lemma_closed_form(self):
        """Path of length two, s = ½: -γ/2 + 8γ² at the edge of the hypothesis."""
        v = solve_harmonic(path(3), 0, 2)
        assert math.isclose(lemma1_log_bound(path(3), v, 0.5, 0.25), 0.375)
        assert lemma1_log_bound(path(3), v, 0.5, 0.0) == 0.0
        with pytest.raises(HypothesisViolation):
            lemma1_log_bound(path(3), v, 0.5, 0.3)

    def test_classify(self):
        """Three-sigma rule with the ESS gate."""
        assert classify(0.5, 1.0, 0.1, 1000.0, 200.0) == PASS
        assert classify(1.2, 1.0, 0.1, 1000.0, 200.0) == PASS
        assert classify(1.5, 1.0, 0.1, 1000.0, 200.0) == FAIL
        assert classify(0.5, 1.0, math.nan, 1000.0, 200.0) == INCONCLUSIVE
        assert classify(0.5, 1.0, 0.1, 50.0, 200.0) == INCONCLUSIVE
        assert classify(0.5, 1.0, 0.1, math.nan, 200.0) == INCONCLUSIVE

    def test_bound_check_requires_matching_target(self, box2):
        """An estimate for another vertex is refused."""
        plan = build_plan(box2, (1, 0), 0.5, 1.0)
        estimate = MomentEstimate((2, 0), 0.5, 0.9, 0.01, 1000.0, (0.9,), (2.0,), 1000, 1)
        with pytest.raises(ValueError):
            lemma1_bound_check(box2, plan, estimate)

    def test_bound_check_report(self, box2):
        """A small estimate passes against the planned bound."""
        plan = build_plan(box2, (1, 0), 0.5, 1.0)
        estimate = MomentEstimate((1, 0), 0.5, 0.5, 0.01, 1000.0, (0.5, 0.5), (2.0, 2.0), 1000, 2)
        report = lemma1_bound_check(box2, plan, estimate)
        assert report.status == PASS
        assert report.lemma1_bound <= report.instance_bound * (1.0 + 1e-12)
        assert report.to_dict()["y"] == [1, 0]
