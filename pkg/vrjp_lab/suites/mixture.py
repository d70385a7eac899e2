"""
Mixture suite: the VRJP jump chain against the mixture of quenched jump chains
"""

import math

import numpy as np

from vrjp_lab.dynamics.law import (
    JumpChainLaw,
    quenched_mixture_law,
    second_jump_oracle,
    total_variation,
    vrjp_jump_chain_law,
)
from vrjp_lab.dynamics.simulate import quenched_transition_matrix, simulate_quenched, simulate_vrjp
from vrjp_lab.field.quadrature import quenched_first_step_oracle
from vrjp_lab.framework.check import Check, CheckContext
from vrjp_lab.framework.report.models import FAIL, PASS, Verdict
from vrjp_lab.graph.core import Graph, build_z2_box
from vrjp_lab.graph.io import path, triangle, two_vertex


def _weighted_triangle() -> Graph:
    return Graph.from_edges([(0, 1), (1, 2), (0, 2)], [1.0, 2.0, 3.0], root=0)


def _first_step_law(graph: Graph) -> dict:
    neighbours, weights = graph.neighbors(graph.root)
    return {graph.labels[j]: float(w / weights.sum()) for j, w in zip(neighbours, weights, strict=True)}


class FirstJump(Check):
    """k = 1: the VRJP law and the quenched first-step average are both ∝ W."""

    suite = "mixture"
    reference = "VRJP is a mixture of Markov jump processes (first step)"

    def __init__(self, n_runs: int = 200_000, tolerance: float = 1e-6, three_vertex_tolerance: float = 1e-4):
        super().__init__()
        self.n_runs = n_runs
        self.tolerance = tolerance
        self.three_vertex_tolerance = three_vertex_tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        verdicts = []
        cases = [
            ("two_vertex W=2", two_vertex(2.0), self.tolerance),
            ("path n=3 W=1", path(3).with_root(1), self.three_vertex_tolerance),
            ("triangle W=(1,2,3)", _weighted_triangle(), self.three_vertex_tolerance),
        ]
        for instance, graph, tolerance in cases:
            expected = _first_step_law(graph)
            observed = quenched_first_step_oracle(graph)
            error = max(abs(observed[label] - p) for label, p in expected.items())
            verdicts.append(self.at_most(f"{instance}: quadrature of the quenched first step", error, 0.0, tolerance))

        graph = _weighted_triangle()
        exact = JumpChainLaw(0, 1, {(label,): p for label, p in _first_step_law(graph).items()})
        simulated = vrjp_jump_chain_law(graph, None, 1, self.n_runs, context.seed, executor=context.executor)
        tv, combined = total_variation(simulated, exact)
        verdicts.append(self.at_most(f"triangle W=(1,2,3), {self.n_runs} VRJP runs, TV", tv, 0.0, 3.0 * combined))
        return verdicts


class SecondJump(Check):
    """Simulated law of the first two destinations against the holding-time integral."""

    suite = "mixture"
    reference = "VRJP jump rates W_ij L_j"

    def __init__(self, n_runs: int = 200_000):
        super().__init__()
        self.n_runs = n_runs

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        verdicts = []
        for instance, graph in [("triangle W=1", triangle()), ("triangle W=(1,2,3)", _weighted_triangle())]:
            exact = JumpChainLaw(graph.root_label, 2, second_jump_oracle(graph))
            simulated = vrjp_jump_chain_law(graph, None, 2, self.n_runs, context.seed, executor=context.executor)
            tv, combined = total_variation(simulated, exact)
            verdicts.append(
                self.at_most(f"{instance}, {self.n_runs} runs, TV", tv, 0.0, 3.0 * combined, oracle_total=exact.total())
            )
        return verdicts


class MixtureIdentity(Check):
    """TV between the VRJP k-step jump-chain law and the averaged quenched law, against 3σ."""

    suite = "mixture"
    reference = "VRJP is a mixture of Markov jump processes"

    def __init__(self, k: int = 3, n_runs: int = 1_000_000, n_field_samples: int = 100_000):
        super().__init__()
        self.k = k
        self.n_runs = n_runs
        self.n_field_samples = n_field_samples

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        graph = triangle()
        samples = context.samples(graph, context.sampler_config(n_samples=self.n_field_samples))
        mixture = quenched_mixture_law(graph, None, self.k, samples.values, context.config.sampler.n_batches)
        vrjp = vrjp_jump_chain_law(
            graph, None, self.k, self.n_runs, context.seed, context.config.vrjp.batch_size, context.executor
        )
        tv, combined = total_variation(vrjp, mixture)
        return [
            self.at_most(
                f"triangle W=1, k={self.k}, {self.n_runs} runs vs {self.n_field_samples} fields",
                tv,
                0.0,
                3.0 * combined,
                combined_stderr=combined,
                mixture_total=mixture.total(),
            )
        ]


class JumpChainBookkeeping(Check):
    """Trajectory invariants, quenched row sums and the degenerate two-vertex law."""

    suite = "mixture"
    reference = "local times L_j = 1 + sojourn at j"

    def __init__(self, n_trajectories: int = 100, k: int = 20):
        super().__init__()
        self.n_trajectories = n_trajectories
        self.k = k

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        verdicts = []
        for instance, graph in [("box N=2", build_z2_box(2)), ("triangle W=(1,2,3)", _weighted_triangle())]:
            bad = 0
            for i in range(self.n_trajectories):
                rng = context.rng(self.name, instance, i)
                u = rng.normal(0.0, 1.0, graph.n_vertices)
                u[graph.root] = 0.0
                for trajectory in (simulate_vrjp(graph, None, self.k, rng), simulate_quenched(graph, u, None, self.k, rng)):
                    bad += int(bool(trajectory.problems(graph)))
            verdicts.append(
                self.verdict(
                    f"{instance}: {2 * self.n_trajectories} trajectories of {self.k} jumps with problems",
                    bad,
                    0.0,
                    0.0,
                    PASS if bad == 0 else FAIL,
                )
            )

        box = build_z2_box(2)
        fields = context.rng(self.name, "rows").normal(0.0, 2.0, (50, box.n_vertices))
        fields[:, box.root] = 0.0
        rows = quenched_transition_matrix(box, fields).sum(axis=-1)
        verdicts.append(self.at_most("box N=2, 50 fields: |row sum - 1|", float(np.max(np.abs(rows - 1.0))), 0.0, 1e-14))

        p = quenched_transition_matrix(triangle(), [0.0, 1.0, -1.0])[0, 1]
        verdicts.append(self.close("triangle u=(0,1,-1): P(0→1)", p, math.e / (math.e + 1.0 / math.e), 1e-12))

        graph = two_vertex()
        law = vrjp_jump_chain_law(graph, None, 3, 1000, context.seed)
        verdicts.append(self.close("two_vertex k=3: P(1,0,1)", law.probabilities.get((1, 0, 1), 0.0), 1.0, 0.0))
        return verdicts
