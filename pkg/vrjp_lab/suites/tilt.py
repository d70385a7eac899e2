"""
Tilt suite: Radon-Nikodym ratio of the shifted measure and the tilted weights
"""

import math

import numpy as np

from vrjp_lab.deformation.harmonic import solve_harmonic
from vrjp_lab.deformation.plan import conjugate_exponent
from vrjp_lab.field.density import log_density, rn_ratio, tilted_weights, tree_polynomial_ratio_bound
from vrjp_lab.field.quadrature import tilted_moment_oracle
from vrjp_lab.field.sample import FieldSample
from vrjp_lab.framework.check import Check, CheckContext
from vrjp_lab.framework.report.models import FAIL, PASS, Verdict
from vrjp_lab.graph.core import edge_gradients
from vrjp_lab.graph.io import random_connected, two_vertex


def _random_instance(rng: np.random.Generator, max_vertices: int):
    graph = random_connected(int(rng.integers(2, max_vertices + 1)), rng)
    u = FieldSample.from_free(graph, rng.normal(0.0, 1.0, graph.n_vertices - 1))
    v = FieldSample.from_free(graph, rng.uniform(-1.0, 1.0, graph.n_vertices - 1)).values
    return graph, u, v


class RnRatioConsistency(Check):
    """rn_ratio against the difference of log-densities, and the two-vertex closed form."""

    suite = "tilt"
    reference = "density of the shifted field u - γv"

    def __init__(self, n_instances: int = 100, max_vertices: int = 5, tolerance: float = 1e-10):
        super().__init__()
        self.n_instances = n_instances
        self.max_vertices = max_vertices
        self.tolerance = tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        worst, worst_zero = 0.0, 0.0
        for i in range(self.n_instances):
            rng = context.rng(self.name, i)
            graph, u, v = _random_instance(rng, self.max_vertices)
            gamma = float(rng.uniform(-1.0, 1.0))
            expected = log_density(graph, u) - log_density(graph, u.shifted(v, gamma))
            worst = max(worst, abs(rn_ratio(graph, u, v, gamma) - expected) / max(1.0, abs(expected)))
            worst_zero = max(worst_zero, abs(rn_ratio(graph, u, v, 0.0)))

        closed = 0.0
        rng = context.rng(self.name, "two_vertex")
        for w in (0.5, 1.0, 3.0):
            for x, gamma in rng.normal(0.0, 1.0, size=(5, 2)):
                expected = 0.5 * w * (math.exp(x) * math.expm1(gamma) + math.exp(-x) * math.expm1(-gamma)) + gamma / 2
                closed = max(closed, abs(rn_ratio(two_vertex(w), [0.0, x], [0.0, 1.0], gamma) - expected))
        return [
            self.at_most(f"{self.n_instances} random instances", worst, 0.0, self.tolerance),
            self.at_most("γ = 0 gives log-ratio 0", worst_zero, 0.0, 0.0),
            self.at_most("two_vertex closed form, W in {0.5, 1, 3}", closed, 0.0, self.tolerance),
        ]


class TiltedMoment(Check):
    """E^{Q^γ}(e^{u_y}) = e^{-γ} by quadrature on the two-vertex graph."""

    suite = "tilt"
    reference = "E[e^{u_y}] under the γ-shifted measure"

    def __init__(self, gammas: list[float] | None = None, tolerance: float = 1e-6):
        super().__init__()
        self.gammas = gammas or [0.1, 0.5, 1.0, -0.5]
        self.tolerance = tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        graph = two_vertex(1.0)
        return [
            self.close(
                f"two_vertex W=1, v=(0,1), γ={gamma}",
                tilted_moment_oracle(graph, 1, [0.0, 1.0], gamma),
                math.exp(-gamma),
                self.tolerance,
            )
            for gamma in self.gammas
        ]


class TiltedWeightsBound(Check):
    """W̃ ≥ W/2 and D(W,u)/D(W̃,u) below its product and exponential bounds.

    γ is drawn so that q²γ max|∇v| covers (0, ½]; v is the harmonic
    potential between the root and a random vertex.
    """

    suite = "tilt"
    reference = "tilted conductances W̃ = W(1 - 2q³γ²|∇v|²)"

    def __init__(self, n_instances: int = 50, max_vertices: int = 5, s_values: list[float] | None = None):
        super().__init__()
        self.n_instances = n_instances
        self.max_vertices = max_vertices
        self.s_values = s_values or [0.25, 0.5, 0.75]

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        min_ratio, failures, plain_below = math.inf, 0, 0
        worst_slack = -math.inf
        for i in range(self.n_instances):
            rng = context.rng(self.name, i)
            graph, u, _ = _random_instance(rng, self.max_vertices)
            target = graph.labels[int(rng.integers(1, graph.n_vertices))]
            v = solve_harmonic(graph, graph.root_label, target)
            q = conjugate_exponent(float(rng.choice(self.s_values)))
            gamma = float(rng.uniform(0.0, 0.5)) / (q**2 * float(np.max(np.abs(edge_gradients(graph, v)))))
            bound = tree_polynomial_ratio_bound(graph, u, v, q, gamma)
            min_ratio = min(min_ratio, tilted_weights(graph, v, q, gamma).min_ratio)
            failures += 0 if bound.holds else 1
            plain_below += int(bound.log_product_bound > bound.log_plain_bound)
            worst_slack = max(worst_slack, bound.log_ratio - bound.log_product_bound)
        return [
            self.at_least(f"{self.n_instances} instances, min W̃/W", min_ratio, 0.5, 1e-12),
            self.verdict(
                f"{self.n_instances} instances, ratio ≤ product ≤ exp(2 ln2 Σ h)",
                failures,
                0.0,
                0.0,
                PASS if failures == 0 else FAIL,
                {"max_log_ratio_minus_product": worst_slack, "literal_exponent_exceeded": plain_below},
            ),
        ]
