"""
Unit tests for VRJP and quenched simulation and the jump-chain laws
"""

import math

import numpy as np
import pytest

from vrjp_lab.dynamics.law import (
    JumpChainLaw,
    enumerate_sequences,
    quenched_mixture_law,
    second_jump_oracle,
    total_variation,
    vrjp_jump_chain_law,
)
from vrjp_lab.dynamics.simulate import (
    quenched_transition_matrix,
    simulate_quenched,
    simulate_vrjp,
    simulate_vrjp_batch,
)
from vrjp_lab.graph.core import Graph


class TestSimulation:
    """Test single trajectories."""

    def test_vrjp_trajectory_consistent(self, box1):
        """Jumps follow edges, times increase and local times match the event list."""
        trajectory = simulate_vrjp(box1, None, 20, seed=11)
        assert trajectory.n_jumps == 20
        assert trajectory.problems(box1) == []
        assert trajectory.start == box1.root

    def test_quenched_trajectory_consistent(self, k3):
        """The quenched process keeps the same bookkeeping."""
        trajectory = simulate_quenched(k3, [0.0, 0.5, -0.5], 1, 15, seed=3)
        assert trajectory.start == 1
        assert trajectory.problems(k3) == []

    def test_rows_start_at_time_zero(self, k3):
        """CSV rows begin with the start vertex."""
        rows = simulate_vrjp(k3, None, 3, seed=1).to_rows(k3)
        assert rows[0] == {"time": 0.0, "vertex": "0"}
        assert len(rows) == 4

    def test_seeded(self, k3):
        """Same seed, same trajectory."""
        a = simulate_vrjp(k3, None, 10, seed=5)
        b = simulate_vrjp(k3, None, 10, seed=5)
        np.testing.assert_array_equal(a.times, b.times)
        np.testing.assert_array_equal(a.destinations, b.destinations)

    def test_needs_a_jump(self, k3):
        """k must be positive."""
        with pytest.raises(ValueError):
            simulate_vrjp(k3, None, 0, seed=1)

    def test_batch_follows_edges(self, box1):
        """Vectorised runs only jump between neighbours."""
        destinations = simulate_vrjp_batch(box1, None, 5, 200, np.random.default_rng(0))
        assert destinations.shape == (200, 5)
        previous = np.full(200, box1.root)
        for step in range(5):
            assert np.all(box1.weight_matrix[previous, destinations[:, step]].A1 > 0)
            previous = destinations[:, step]


class TestQuenched:
    """Test the quenched jump chain."""

    def test_rows_sum_to_one(self, box1, pinned_field):
        """Each row of the transition matrix is a probability vector on neighbours."""
        P = quenched_transition_matrix(box1, pinned_field(box1))
        np.testing.assert_allclose(P.sum(axis=1), 1.0, rtol=1e-12)
        assert np.all(P[box1.weight_matrix.toarray() == 0] == 0.0)

    def test_triangle_entry(self, k3):
        """P_01 = e^{u_1}/(e^{u_1} + e^{u_2})."""
        P = quenched_transition_matrix(k3, [0.0, 1.0, -1.0])
        assert math.isclose(P[0, 1], math.e / (math.e + math.exp(-1.0)), rel_tol=1e-12)

    def test_zero_field_is_simple_walk(self, k3):
        """u ≡ 0 on K₃ gives probability 1/8 to each of the eight 3-step sequences."""
        law = quenched_mixture_law(k3, None, 3, np.zeros((2, 10, 3)), n_batches=5)
        assert len(law.probabilities) == 8
        for p in law.probabilities.values():
            assert math.isclose(p, 0.125, rel_tol=1e-12)
        assert all(se <= 1e-15 for se in law.stderr.values())
        assert law.n_samples == 20


class TestLaws:
    """Test jump-chain laws and their comparison."""

    def test_two_vertex_law_is_deterministic(self, edge):
        """A single edge forces 1, 0, 1."""
        law = vrjp_jump_chain_law(edge, None, 3, 1000, seed=1, batch_size=300)
        assert law.probabilities == {(1, 0, 1): 1.0}
        assert law.n_samples == 1000

    def test_law_reproducible_and_consistent(self, k3):
        """Same seed and batching, same law; probabilities sum to one on neighbour paths."""
        a = vrjp_jump_chain_law(k3, None, 3, 5000, seed=9, batch_size=2000)
        b = vrjp_jump_chain_law(k3, None, 3, 5000, seed=9, batch_size=2000)
        assert a.probabilities == b.probabilities
        assert math.isclose(a.total(), 1.0, rel_tol=1e-12)
        assert a.is_neighbour_consistent(k3)

    def test_first_jump_proportional_to_weights(self):
        """The first jump picks j with probability W_{0j}/Σ W."""
        g = Graph.from_edges([(0, 1), (1, 2), (0, 2)], [1.0, 1.0, 3.0], root=0)
        simulated = vrjp_jump_chain_law(g, None, 1, 20_000, seed=4)
        exact = JumpChainLaw(0, 1, {(1,): 0.25, (2,): 0.75})
        tv, combined = total_variation(simulated, exact)
        assert tv <= 5.0 * combined

    def test_second_jump_oracle(self, k3):
        """The exact two-step law is a probability distribution on neighbour pairs."""
        law = second_jump_oracle(k3)
        assert set(law) == {(1, 0), (1, 2), (2, 0), (2, 1)}
        assert math.isclose(sum(law.values()), 1.0, abs_tol=1e-9)
        assert math.isclose(law[(1, 0)], law[(2, 0)], rel_tol=1e-9)
        assert law[(1, 0)] > law[(1, 2)]

    def test_total_variation_identical(self, k3):
        """A law is at distance zero from itself."""
        law = second_jump_oracle(k3)
        exact = JumpChainLaw(0, 2, law)
        assert total_variation(exact, exact) == (0.0, 0.0)

    def test_total_variation_noise_scale(self):
        """The noise scale sums per-cell errors over the union of supports."""
        a = JumpChainLaw(0, 1, {(1,): 0.5, (2,): 0.5}, {(1,): 0.03, (2,): 0.03}, n_samples=100)
        b = JumpChainLaw(0, 1, {(1,): 0.4, (3,): 0.6}, {(1,): 0.04, (3,): 0.05}, n_samples=100)
        tv, scale = total_variation(a, b)
        assert math.isclose(tv, 0.5 * (0.1 + 0.5 + 0.6))
        assert math.isclose(scale, 0.5 * (0.05 + 0.03 + 0.05))

    def test_enumerate_sequences(self, k3):
        """2^k paths from a vertex of K₃."""
        assert len(enumerate_sequences(k3, 0, 4)) == 16
