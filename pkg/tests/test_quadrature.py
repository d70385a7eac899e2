"""
Unit tests for the quadrature oracles

One- and two-dimensional grids only; larger graphs are refused.
"""

import math

import numpy as np
import pytest

from vrjp_lab.field.quadrature import (
    exp_moment_identity_oracle,
    exp_moment_oracle,
    marginal_cdf,
    normalization_oracle,
    quenched_first_step_oracle,
    tilted_moment_oracle,
)
from vrjp_lab.framework.errors import QuadratureDimensionError
from vrjp_lab.graph.io import path, triangle, two_vertex


class TestOracles:
    """Test normalisation and exponential-moment identities."""

    @pytest.mark.parametrize("w", [0.2, 1.0, 5.0])
    def test_two_vertex_normalization(self, w):
        """The density integrates to one."""
        result = normalization_oracle(two_vertex(w))
        assert abs(result.value - 1.0) <= 1e-8
        assert result.spacing <= 0.5

    def test_triangle_normalization(self):
        """Two free coordinates still integrate to one."""
        assert abs(normalization_oracle(triangle(1.0)).value - 1.0) <= 1e-8

    def test_path_normalization(self):
        """Grid points with gradients near 80 keep a finite density."""
        assert abs(normalization_oracle(path(3)).value - 1.0) <= 1e-8

    def test_triangle_exp_moment_identity(self):
        """E[e^{u_j}] = 1 with two free coordinates."""
        assert abs(exp_moment_identity_oracle(triangle(), 2) - 1.0) <= 1e-4

    @pytest.mark.parametrize("w", [0.5, 2.0])
    def test_exp_moment_identity(self, w):
        """E[e^{u_j}] = 1."""
        assert abs(exp_moment_identity_oracle(two_vertex(w), 1) - 1.0) <= 1e-8

    def test_root_moment_is_one(self, edge):
        """u at the root is 0."""
        assert exp_moment_oracle(edge, 0, 0.5) == 1.0

    def test_half_moment_below_one(self, edge):
        """Jensen: E[e^{u/2}] < 1."""
        assert exp_moment_oracle(edge, 1, 0.5) < 1.0

    def test_tilted_moment(self, edge):
        """Under u - γv, E[e^{u_1}] picks up the factor e^{-γ}."""
        gamma = 0.5
        assert abs(tilted_moment_oracle(edge, 1, [0.0, 1.0], gamma) - math.exp(-gamma)) <= 1e-8

    def test_single_neighbour_first_step(self):
        """With one neighbour the first step is certain."""
        law = quenched_first_step_oracle(two_vertex(2.0))
        assert list(law) == [1]
        assert abs(law[1] - 1.0) <= 1e-8

    def test_dimension_cap(self, box1):
        """Nine free coordinates are refused."""
        with pytest.raises(QuadratureDimensionError):
            normalization_oracle(box1)


class TestMarginalCdf:
    """Test the tabulated marginal CDF."""

    def test_monotone_and_normalised(self, edge):
        """The CDF rises from 0 to 1."""
        grid, cdf = marginal_cdf(edge, 1, spacing=0.05)
        assert len(grid) == len(cdf)
        assert cdf[0] == 0.0
        assert cdf[-1] == 1.0
        assert np.all(np.diff(cdf) >= 0.0)

    def test_root_refused(self, edge):
        """The pinned coordinate has no marginal."""
        with pytest.raises(ValueError):
            marginal_cdf(edge, 0)
