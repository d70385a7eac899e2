"""
Moments suite: E[e^{u_y}] = 1, the Jensen bound and sampler soundness
"""

import math

import numpy as np

from vrjp_lab.field.density import log_density, tree_polynomial
from vrjp_lab.field.quadrature import exp_moment_identity_oracle, exp_moment_oracle, marginal_cdf
from vrjp_lab.framework.check import Check, CheckContext
from vrjp_lab.framework.report.models import FAIL, INCONCLUSIVE, PASS, Verdict
from vrjp_lab.graph.core import build_z2_box
from vrjp_lab.graph.io import triangle, two_vertex
from vrjp_lab.sampler.estimate import estimate_exp_moment, ks_distance
from vrjp_lab.sampler.metropolis import FieldChain
from vrjp_lab.sampler.samples import sample_field


class ExpMomentIdentity(Check):
    """Quadrature of E[e^{u_{j₀}}] on two- and three-vertex graphs."""

    suite = "moments"
    reference = "E[e^{u_j}] = 1 for every vertex j"

    def __init__(self, weights: list[float] | None = None, tolerance: float = 1e-6, triangle_tolerance: float = 1e-4):
        super().__init__()
        self.weights = weights or [0.2, 1.0, 5.0]
        self.tolerance = tolerance
        self.triangle_tolerance = triangle_tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        verdicts = []
        for w in self.weights:
            value = exp_moment_identity_oracle(two_vertex(w), 1)
            verdicts.append(self.close(f"two_vertex W={w}, j0=1", value, 1.0, self.tolerance))
        value = exp_moment_identity_oracle(triangle(), 2)
        verdicts.append(self.close("triangle W=1, j0=2", value, 1.0, self.triangle_tolerance))
        verdicts.append(self.close("two_vertex W=1, j0=root", exp_moment_identity_oracle(two_vertex(), 0), 1.0, 0.0))
        return verdicts


class SamplerMoment(Check):
    """Monte Carlo E[e^{u_y}] within 3σ of 1 on the triangle and on a box."""

    suite = "moments"
    reference = "E[e^{u_j}] = 1 for every vertex j"

    def __init__(self, box_n: int = 3, n_samples: int = 8000, triangle_samples: int = 20000):
        super().__init__()
        self.box_n = box_n
        self.n_samples = n_samples
        self.triangle_samples = triangle_samples

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        threshold = context.config.deformation.ess_threshold
        cases = [
            (f"triangle W=1, y=1, {self.triangle_samples} samples", triangle(), 1, self.triangle_samples),
            (f"box N={self.box_n}, y=(1,0), {self.n_samples} samples", build_z2_box(self.box_n), (1, 0), self.n_samples),
        ]
        verdicts = []
        for instance, graph, y, n_samples in cases:
            samples = context.samples(graph, context.sampler_config(n_samples=n_samples))
            estimate = estimate_exp_moment(samples, y, 1.0, context.config.sampler.n_batches)
            verdicts.append(
                self.within_sigma(instance, estimate.estimate, 1.0, estimate.stderr, estimate.ess, threshold)
            )
        return verdicts


class JensenBound(Check):
    """E[e^{s u_y}] ≤ 1 + 3σ for s < 1 on a box."""

    suite = "moments"
    reference = "Jensen: E[e^{s u_y}] ≤ (E[e^{u_y}])^s = 1"

    def __init__(self, box_n: int = 3, n_samples: int = 8000, s_values: list[float] | None = None):
        super().__init__()
        self.box_n = box_n
        self.n_samples = n_samples
        self.s_values = s_values or [0.25, 0.5, 0.75]

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        threshold = context.config.deformation.ess_threshold
        samples = context.samples(build_z2_box(self.box_n), context.sampler_config(n_samples=self.n_samples))
        verdicts = []
        for y in [(1, 0), (2, 0), (2, 2)]:
            if max(abs(y[0]), abs(y[1])) > self.box_n:
                continue
            for s in self.s_values:
                estimate = estimate_exp_moment(samples, y, s, context.config.sampler.n_batches)
                sigma = 3.0 * estimate.stderr
                if not math.isfinite(sigma) or not estimate.ess >= threshold:
                    status = INCONCLUSIVE
                else:
                    status = PASS if estimate.estimate <= 1.0 + sigma else FAIL
                verdicts.append(
                    self.verdict(
                        f"box N={self.box_n}, y={y}, s={s}",
                        estimate.estimate,
                        1.0,
                        sigma,
                        status,
                        {"stderr": estimate.stderr, "ess": estimate.ess},
                    )
                )
        return verdicts


class TwoVertexMarginal(Check):
    """Sampled law of u_j on the two-vertex graph against its quadrature CDF and moments."""

    suite = "moments"
    reference = "sampler targets the mixing measure"

    def __init__(self, n_samples: int = 100_000, ks_threshold: float = 0.02, s: float = 0.5):
        super().__init__()
        self.n_samples = n_samples
        self.ks_threshold = ks_threshold
        self.s = s

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        graph = two_vertex(1.0)
        samples = context.samples(graph, context.sampler_config(n_samples=self.n_samples))
        grid, cdf = marginal_cdf(graph, 1)
        distance = ks_distance(samples.coordinate(1), grid, cdf)

        estimate = estimate_exp_moment(samples, 1, self.s, context.config.sampler.n_batches)
        expected = exp_moment_oracle(graph, 1, self.s)
        return [
            self.at_most(f"two_vertex W=1, KS distance, {self.n_samples} samples", distance, self.ks_threshold),
            self.within_sigma(
                f"two_vertex W=1, E[e^(s u)] s={self.s} vs quadrature",
                estimate.estimate,
                expected,
                estimate.stderr,
            ),
        ]


class SamplerReproducibility(Check):
    """Identical (graph, config, seed) give bit-identical samples; a different seed does not."""

    suite = "moments"
    reference = "seeded counter-based streams"

    def __init__(self, n_samples: int = 2000):
        super().__init__()
        self.n_samples = n_samples

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        graph = triangle()
        cfg = context.sampler_config(n_samples=self.n_samples, burn_in=50)
        first = sample_field(graph, cfg, executor=context.executor)
        second = sample_field(graph, cfg, executor=context.executor)
        other = sample_field(graph, context.sampler_config(n_samples=self.n_samples, burn_in=50, seed=cfg.seed + 1))
        mismatches = float(np.count_nonzero(first.values != second.values))
        return [
            self.close("triangle, same seed twice: differing entries", mismatches, 0.0, 0.0),
            self.verdict(
                "triangle, seed + 1 differs",
                float(np.array_equal(first.values, other.values)),
                0.0,
                0.0,
                PASS if not np.array_equal(first.values, other.values) else FAIL,
            ),
        ]


class DeterminantDrift(Check):
    """Incremental ln D against fresh factorizations, sweep by sweep."""

    suite = "moments"
    reference = "determinant-lemma consistency"

    def __init__(self, box_n: int = 3, n_sweeps: int = 200, tolerance: float = 1e-8, n_moves: int = 200):
        super().__init__()
        self.box_n = box_n
        self.n_sweeps = n_sweeps
        self.tolerance = tolerance
        self.n_moves = n_moves

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        graph = build_z2_box(self.box_n)
        chain = FieldChain(
            graph,
            context.rng(self.name),
            step_size=0.7,
            refresh_period=self.n_sweeps + 1,
            drift_tolerance=math.inf,
        )
        worst = 0.0
        for _ in range(self.n_sweeps):
            chain.sweep()
            worst = max(worst, chain.refresh())
        independent = abs(chain.log_tree - tree_polynomial(graph, chain.u))

        # log acceptance ratio equals the change of log-density for arbitrary moves
        rng = context.rng(self.name, "moves")
        balance = 0.0
        base = chain.log_density()
        for _ in range(self.n_moves):
            k = int(rng.choice(graph.free_vertices))
            new_value = chain.u[k] + rng.normal(0.0, 1.0)
            moved = chain.u.copy()
            moved[k] = new_value
            expected = log_density(graph, moved) - base
            balance = max(balance, abs(chain.log_acceptance_ratio(k, new_value) - expected))
        return [
            self.at_most(f"box N={self.box_n}, {self.n_sweeps} sweeps, per-sweep drift", worst, 0.0, self.tolerance),
            self.at_most(f"box N={self.box_n}, Cholesky vs LU after sweeps", independent, 0.0, self.tolerance),
            self.at_most(f"box N={self.box_n}, {self.n_moves} moves, acceptance vs density", balance, 0.0, 1e-8),
        ]


class VanishingStep(Check):
    """Acceptance rate tends to 1 as the proposal scale shrinks."""

    suite = "moments"
    reference = "sampler sanity at σ → 0"

    def __init__(self, step_size: float = 1e-4, n_sweeps: int = 50, min_rate: float = 0.99):
        super().__init__()
        self.step_size = step_size
        self.n_sweeps = n_sweeps
        self.min_rate = min_rate

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        chain = FieldChain(build_z2_box(2), context.rng(self.name), step_size=self.step_size)
        rate = sum(chain.sweep() for _ in range(self.n_sweeps)) / self.n_sweeps
        return [self.at_least(f"box N=2, σ={self.step_size}", rate, self.min_rate)]
