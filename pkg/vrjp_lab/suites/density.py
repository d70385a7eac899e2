"""
Density suite: spanning-tree polynomial and the normalization of the mixing measure
"""

import math

from vrjp_lab.field.arborescence import tree_polynomial_enumerated
from vrjp_lab.field.density import log_density, tree_polynomial, tree_polynomial_cholesky
from vrjp_lab.field.quadrature import normalization_oracle
from vrjp_lab.field.sample import FieldSample
from vrjp_lab.framework.check import Check, CheckContext
from vrjp_lab.framework.report.models import Verdict
from vrjp_lab.graph.io import path, random_connected, triangle, two_vertex


class MatrixTreeOracle(Check):
    """exp(tree_polynomial) against brute-force arborescence enumeration on random small graphs."""

    suite = "density"
    reference = "directed matrix-tree theorem"

    def __init__(self, n_graphs: int = 200, max_vertices: int = 5, tolerance: float = 1e-10):
        super().__init__()
        self.n_graphs = n_graphs
        self.max_vertices = max_vertices
        self.tolerance = tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        worst, worst_cholesky, worst_index = 0.0, 0.0, -1
        for i in range(self.n_graphs):
            rng = context.rng(self.name, i)
            graph = random_connected(int(rng.integers(2, self.max_vertices + 1)), rng)
            u = FieldSample.from_free(graph, rng.normal(0.0, 1.5, graph.n_vertices - 1))
            fast = tree_polynomial(graph, u)
            relative = abs(math.expm1(fast - tree_polynomial_enumerated(graph, u)))
            if relative > worst:
                worst, worst_index = relative, i
            worst_cholesky = max(worst_cholesky, abs(math.expm1(tree_polynomial_cholesky(graph, u) - fast)))
        return [
            self.at_most(
                f"{self.n_graphs} random connected graphs, <= {self.max_vertices} vertices",
                worst,
                0.0,
                self.tolerance,
                worst_instance=worst_index,
            ),
            self.at_most("Cholesky route vs LU route, same instances", worst_cholesky, 0.0, self.tolerance),
        ]


class TreePolynomialClosedForms(Check):
    """Hand-enumerated values of D and of the log-density on two- and three-vertex graphs."""

    suite = "density"
    reference = "spanning-tree polynomial and density at small instances"

    def __init__(self, tolerance: float = 1e-12):
        super().__init__()
        self.tolerance = tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        rng = context.rng(self.name)
        w, x = 2.5, float(rng.normal())
        u1, u2 = rng.normal(size=2)
        cases = [
            ("two_vertex W=2.5: ln D = ln W - u_j", tree_polynomial(two_vertex(w), [0.0, x]), math.log(w) - x),
            ("triangle W=1, u=0: D = 3", tree_polynomial(triangle(), [0.0, 0.0, 0.0]), math.log(3.0)),
            (
                "triangle W=1, random (u1, u2): three arborescences",
                tree_polynomial(triangle(), [0.0, u1, u2]),
                math.log(math.exp(-u1 - u2) + math.exp(-u1) + math.exp(-u2)),
            ),
            (
                "two_vertex W=1, u=0: log density = -ln(2π)/2",
                log_density(two_vertex(), [0.0, 0.0]),
                -0.5 * math.log(2.0 * math.pi),
            ),
        ]
        return [self.close(instance, observed, expected, self.tolerance) for instance, observed, expected in cases]


class Normalization(Check):
    """Quadrature of the density integrates to 1 for several conductances."""

    suite = "density"
    reference = "the mixing measure is a probability measure"

    def __init__(
        self,
        weights: list[float] | None = None,
        two_vertex_tolerance: float = 1e-6,
        three_vertex_tolerance: float = 1e-4,
    ):
        super().__init__()
        self.weights = weights or [0.2, 1.0, 5.0]
        self.two_vertex_tolerance = two_vertex_tolerance
        self.three_vertex_tolerance = three_vertex_tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        verdicts = []
        for w in self.weights:
            cases = [
                (f"two_vertex W={w}", two_vertex(w), self.two_vertex_tolerance),
                (f"path n=3 W={w}", path(3, w), self.three_vertex_tolerance),
                (f"triangle W={w}", triangle(w), self.three_vertex_tolerance),
            ]
            for instance, graph, tolerance in cases:
                result = normalization_oracle(graph)
                verdicts.append(
                    self.close(instance, result.value, 1.0, tolerance, spacing=result.spacing, points=result.n_points)
                )
        return verdicts


class ShiftCovariance(Check):
    """Re-rooting at j₀ with u ↦ u - u_{j₀} multiplies the density by e^{u_{j₀}}.

    log q_{j₀}(u - u_{j₀}) = log q_{i₀}(u) + u_{j₀}: reversing the tree path
    from j₀ to i₀ maps arborescences onto each other with weight factor
    e^{2(u_{j₀} - u_{i₀})}, and √D turns it into e^{u_{j₀}}.
    """

    suite = "density"
    reference = "change of variables behind E[e^{u_j}] = 1"

    def __init__(self, n_graphs: int = 50, max_vertices: int = 5, tolerance: float = 1e-10):
        super().__init__()
        self.n_graphs = n_graphs
        self.max_vertices = max_vertices
        self.tolerance = tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        worst = 0.0
        for i in range(self.n_graphs):
            rng = context.rng(self.name, i)
            graph = random_connected(int(rng.integers(2, self.max_vertices + 1)), rng)
            u = FieldSample.from_free(graph, rng.normal(0.0, 1.0, graph.n_vertices - 1)).values
            j0 = int(rng.integers(graph.n_vertices))
            rerooted = graph.with_root(graph.labels[j0])
            lhs = log_density(rerooted, u - u[j0])
            rhs = log_density(graph, u) + u[j0]
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        return [self.at_most(f"{self.n_graphs} random graphs and roots", worst, 0.0, self.tolerance)]
