"""
Unit tests for the Metropolis field sampler and the moment estimator
"""

import math

import numpy as np
import pytest
from scipy import stats

from vrjp_lab.field.density import log_density, tree_polynomial
from vrjp_lab.framework.config import SamplerConfig
from vrjp_lab.framework.errors import SamplerDriftError
from vrjp_lab.framework.seeding import stream
from vrjp_lab.graph.io import two_vertex
from vrjp_lab.sampler.estimate import estimate_exp_moment, ks_distance
from vrjp_lab.sampler.metropolis import FieldChain, sample_chain
from vrjp_lab.sampler.samples import sample_field


def small_config(**overrides) -> SamplerConfig:
    params = {"n_samples": 400, "n_chains": 2, "burn_in": 20, "thinning": 1, "seed": 3, "n_batches": 10}
    return SamplerConfig(**{**params, **overrides})


class TestFieldChain:
    """Test the incremental Metropolis chain."""

    def test_acceptance_ratio_matches_density(self, k3):
        """The incremental log ratio equals the exact log-density difference."""
        chain = FieldChain(k3, stream(1, "test"))
        chain.reset(np.array([0.0, 0.4, -0.7]))
        proposed = chain.u.copy()
        proposed[2] = 0.9
        expected = log_density(k3, proposed) - log_density(k3, chain.u)
        assert abs(chain.log_acceptance_ratio(2, 0.9) - expected) <= 1e-10

    def test_root_move_refused(self, k3):
        """The pinned coordinate never moves."""
        chain = FieldChain(k3, stream(1, "test"))
        with pytest.raises(ValueError):
            chain.log_acceptance_ratio(0, 1.0)

    def test_log_determinant_tracks_state(self, box1):
        """After many accepted moves the maintained ln D matches a fresh evaluation."""
        chain = FieldChain(box1, stream(5, "drift"), refresh_period=10_000)
        for _ in range(30):
            chain.sweep()
        assert chain.u[box1.root] == 0.0
        assert abs(chain.log_tree - tree_polynomial(box1, chain.u)) <= 1e-8
        assert chain.refresh() <= 1e-8

    def test_drift_guard(self, k3):
        """A negative tolerance turns any refresh into a drift error."""
        chain = FieldChain(k3, stream(1, "test"), drift_tolerance=-1.0)
        with pytest.raises(SamplerDriftError):
            chain.refresh()

    def test_tiny_steps_accepted(self, box1):
        """Vanishing proposals are accepted almost surely."""
        chain = FieldChain(box1, stream(2, "tiny"), step_size=1e-6)
        rates = [chain.sweep() for _ in range(5)]
        assert min(rates) >= 0.99


class TestSampling:
    """Test sample_field and sample_chain."""

    def test_shapes_and_pinning(self, edge):
        """Values are (chains, samples per chain, vertices) with a zero root column."""
        samples = sample_field(edge, small_config())
        assert samples.values.shape == (2, 200, 2)
        assert np.all(samples.values[:, :, 0] == 0.0)
        assert samples.diagnostics()["n_chains"] == 2
        assert np.all((samples.acceptance_rates > 0.0) & (samples.acceptance_rates < 1.0))

    def test_reproducible(self, k3):
        """Same seed, same samples; another seed differs."""
        first = sample_field(k3, small_config())
        again = sample_field(k3, small_config())
        other = sample_field(k3, small_config(seed=4))
        np.testing.assert_array_equal(first.values, again.values)
        assert not np.array_equal(first.values, other.values)

    def test_chain_stream_matches_batch(self, k3):
        """Streaming a chain yields the states run_chain collects."""
        cfg = small_config()
        streamed = np.array([s.values for s in sample_chain(k3, cfg, chain_id=1)])
        np.testing.assert_array_equal(streamed, sample_field(k3, cfg).values[1])

    def test_two_vertex_moment(self):
        """E[e^{u_1}] = 1 on a single edge, loosely."""
        samples = sample_field(two_vertex(1.0), small_config(n_samples=8000, n_chains=4, burn_in=200))
        estimate = estimate_exp_moment(samples, 1, 1.0)
        assert abs(estimate.estimate - 1.0) < 0.3
        assert estimate.stderr_available


class TestEstimate:
    """Test the batch-means estimator."""

    def test_root_is_exact(self, edge):
        """The root gives 1 with zero error."""
        estimate = estimate_exp_moment(sample_field(edge, small_config()), 0, 0.5)
        assert estimate.estimate == 1.0
        assert estimate.stderr == 0.0

    def test_single_chain_has_no_stderr(self, edge):
        """One chain cannot give a between-batch error bar here."""
        estimate = estimate_exp_moment(sample_field(edge, small_config(n_chains=1)), 1, 0.5)
        assert not estimate.stderr_available
        assert math.isnan(estimate.stderr)

    def test_exponent_range(self, edge):
        """s must lie in (0, 1]."""
        samples = sample_field(edge, small_config())
        with pytest.raises(ValueError):
            estimate_exp_moment(samples, 1, 1.5)
        with pytest.raises(ValueError):
            estimate_exp_moment(samples, 1, 0.0)

    def test_ks_distance(self):
        """Standard normal draws sit close to the normal CDF."""
        draws = np.random.default_rng(7).standard_normal(5000)
        grid = np.linspace(-8.0, 8.0, 4001)
        assert ks_distance(draws, grid, stats.norm.cdf(grid)) < 0.03
        assert ks_distance(draws + 1.0, grid, stats.norm.cdf(grid)) > 0.2
