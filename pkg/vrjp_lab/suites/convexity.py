"""
Convexity suite: γ ↦ ln D(W, u + γv) is convex, with its arborescence variance
"""

import numpy as np

from vrjp_lab.deformation.bounds import convexity_check, holder_combination_check
from vrjp_lab.deformation.plan import conjugate_exponent
from vrjp_lab.field.arborescence import arborescence_law
from vrjp_lab.field.density import log_tree_polynomial_derivatives
from vrjp_lab.field.sample import FieldSample
from vrjp_lab.framework.check import Check, CheckContext
from vrjp_lab.framework.report.models import Verdict
from vrjp_lab.graph.core import build_z2_box
from vrjp_lab.graph.io import random_connected, triangle


class ConvexityScan(Check):
    """Minimum central second difference over random instances and a γ grid."""

    suite = "convexity"
    reference = "convexity of γ ↦ ln D(W, u + γv)"

    def __init__(self, n_instances: int = 100, max_vertices: int = 5, n_gammas: int = 9, tolerance: float = 1e-8):
        super().__init__()
        self.n_instances = n_instances
        self.max_vertices = max_vertices
        self.n_gammas = n_gammas
        self.tolerance = tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        gammas = np.linspace(-2.0, 2.0, self.n_gammas)
        worst = np.inf
        for i in range(self.n_instances):
            rng = context.rng(self.name, i)
            graph = random_connected(int(rng.integers(2, self.max_vertices + 1)), rng)
            u = FieldSample.from_free(graph, rng.normal(0.0, 1.0, graph.n_vertices - 1))
            v = FieldSample.from_free(graph, rng.normal(0.0, 1.0, graph.n_vertices - 1))
            worst = min(worst, convexity_check(graph, u, v, gammas).min_second_difference)

        constant = convexity_check(triangle(), [0.0, 0.3, -0.2], [0.0, 0.0, 0.0], gammas)
        return [
            self.at_least(f"{self.n_instances} random instances, {self.n_gammas} γ values", worst, 0.0, self.tolerance),
            self.close("triangle, v = 0: second difference", constant.min_second_difference, 0.0, 1e-12),
        ]


class ArborescenceVariance(Check):
    """Second derivative of ln D equals the variance of Σ_T ∇v under the arborescence law."""

    suite = "convexity"
    reference = "∂²ln D/∂γ² = Var of Σ_T ∇v over random arborescences"

    def __init__(self, n_instances: int = 20, tolerance: float = 1e-6, box_tolerance: float = 1e-5):
        super().__init__()
        self.n_instances = n_instances
        self.tolerance = tolerance
        self.box_tolerance = box_tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        worst_fd, worst_trace = 0.0, 0.0
        for i in range(self.n_instances):
            rng = context.rng(self.name, i)
            graph = triangle(float(rng.uniform(0.5, 2.0)))
            u = FieldSample.from_free(graph, rng.normal(0.0, 1.0, 2))
            v = np.array([0.0, 1.0, 0.0]) if i == 0 else FieldSample.from_free(graph, rng.normal(size=2)).values
            result = convexity_check(graph, u, v, [0.0])
            worst_fd = max(worst_fd, result.variance_error)
            law = arborescence_law(graph, u, v)
            worst_trace = max(worst_trace, abs(log_tree_polynomial_derivatives(graph, u, v)[1] - law.variance))

        # Trace formula against finite differences where enumeration is out of reach
        rng = context.rng(self.name, "box")
        box = build_z2_box(2)
        u = FieldSample.from_free(box, rng.normal(0.0, 0.5, box.n_vertices - 1))
        v = FieldSample.from_free(box, rng.normal(0.0, 0.5, box.n_vertices - 1))
        second = log_tree_polynomial_derivatives(box, u, v)[1]
        finite = float(convexity_check(box, u, v, [0.0]).second_derivatives[0])
        return [
            self.at_most(f"{self.n_instances} triangles, finite differences", worst_fd, 0.0, self.tolerance),
            self.at_most(f"{self.n_instances} triangles, trace formula", worst_trace, 0.0, 1e-10),
            self.close("box N=2, trace formula vs finite differences", second, finite, self.box_tolerance * max(1.0, abs(second))),
        ]


class HolderCombination(Check):
    """(1-1/q) ln D(u+γv) + (1/q) ln D(u+γ′v) ≥ ln D(u) with γ′ = -γ(q-1)."""

    suite = "convexity"
    reference = "convexity applied at the Hölder pair (γ, γ′)"

    def __init__(self, n_instances: int = 50, max_vertices: int = 5, tolerance: float = 1e-10):
        super().__init__()
        self.n_instances = n_instances
        self.max_vertices = max_vertices
        self.tolerance = tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        worst = np.inf
        for i in range(self.n_instances):
            rng = context.rng(self.name, i)
            graph = random_connected(int(rng.integers(2, self.max_vertices + 1)), rng)
            u = FieldSample.from_free(graph, rng.normal(0.0, 1.0, graph.n_vertices - 1))
            v = FieldSample.from_free(graph, rng.normal(0.0, 1.0, graph.n_vertices - 1))
            q = conjugate_exponent(float(rng.uniform(0.1, 0.9)))
            worst = min(worst, holder_combination_check(graph, u, v, q, float(rng.uniform(0.0, 1.0))))
        return [self.at_least(f"{self.n_instances} random instances", worst, 0.0, self.tolerance)]
