"""Shared fixtures: small graphs and seeded generators."""

import numpy as np
import pytest

from vrjp_lab.graph.core import build_z2_box
from vrjp_lab.graph.io import random_connected, triangle, two_vertex


@pytest.fixture
def rng():
    return np.random.default_rng(2019)


@pytest.fixture
def edge():
    return two_vertex(1.0)


@pytest.fixture
def k3():
    return triangle(1.0)


@pytest.fixture
def box1():
    return build_z2_box(1)


@pytest.fixture
def box2():
    return build_z2_box(2)


@pytest.fixture
def small_graphs(rng):
    """Random connected graphs on 3 to 5 vertices with non-uniform conductances."""
    return [random_connected(int(n), rng) for n in (3, 4, 4, 5, 5)]


@pytest.fixture
def pinned_field(rng):
    """Factory for Gaussian fields that vanish at the graph's root."""

    def make(graph, scale: float = 1.0) -> np.ndarray:
        u = scale * rng.standard_normal(graph.n_vertices)
        u[graph.root] = 0.0
        return u

    return make
