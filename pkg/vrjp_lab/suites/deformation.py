"""
Deformation suite: harmonic potentials, resistances and the moment bounds they give
"""

import math

import numpy as np

from vrjp_lab.deformation.bounds import classify, lemma1_bound, lemma1_bound_check, lemma1_log_bound
from vrjp_lab.deformation.harmonic import (
    current_flow_bound_check,
    effective_resistance,
    harmonic_report,
    inf_norm,
    nash_williams_sum,
    resistance_monotonicity_scan,
    solve_harmonic,
)
from vrjp_lab.deformation.plan import ASYMPTOTIC_C0, build_plan
from vrjp_lab.framework.check import Check, CheckContext
from vrjp_lab.framework.errors import HypothesisViolation
from vrjp_lab.framework.report.models import FAIL, PASS, Verdict
from vrjp_lab.graph.core import build_z2_box, dirichlet_energy
from vrjp_lab.graph.io import cycle, path, triangle
from vrjp_lab.sampler.estimate import estimate_exp_moment


class HarmonicClosedForms(Check):
    """Series and parallel circuits: potentials, resistances and current maxima."""

    suite = "deformation"
    reference = "harmonic potential and effective resistance"

    def __init__(self, tolerance: float = 1e-10):
        super().__init__()
        self.tolerance = tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        cases = [
            ("path 0-1-2, y=2", path(3), 2, [0.0, 0.5, 1.0], 2.0, 1.0),
            ("4-cycle, y=2", cycle(4), 2, [0.0, 0.5, 1.0, 0.5], 1.0, 0.5),
        ]
        verdicts = []
        for instance, graph, y, v_expected, r_expected, flow_expected in cases:
            v = solve_harmonic(graph, 0, y)
            verdicts.append(self.close(f"{instance}: potential", float(np.max(np.abs(v - v_expected))), 0.0, self.tolerance))
            verdicts.append(self.close(f"{instance}: R", effective_resistance(graph, 0, y), r_expected, self.tolerance))
            verdicts.append(
                self.close(f"{instance}: max R|∇v|", current_flow_bound_check(graph, 0, y), flow_expected, self.tolerance)
            )
        verdicts.append(
            self.close("path 0-1-2, f=(0,1/2,1): energy", dirichlet_energy(path(3), [0.0, 0.5, 1.0]), 0.5, 1e-15)
        )
        verdicts.append(
            self.close("4-cycle, f=(0,1/2,1,1/2): energy", dirichlet_energy(cycle(4), [0.0, 0.5, 1.0, 0.5]), 1.0, 1e-15)
        )
        return verdicts


class BoxResistance(Check):
    """On wired boxes: Nash-Williams, current flow, reciprocity, divergence and two solve routes."""

    suite = "deformation"
    reference = "R(0,y) ≥ Nash-Williams sum; R|∇v| ≤ 1"

    def __init__(self, radii: list[int] | None = None, dense_max_radius: int = 4):
        super().__init__()
        self.radii = radii or [2, 3, 4, 5, 6]
        self.dense_max_radius = dense_max_radius

    def _targets(self, n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
        fixed = [(1, 0), (2, 0), (2, 2), (n, 0)]
        random = [tuple(int(c) for c in rng.integers(-n, n + 1, size=2)) for _ in range(3)]
        return list(dict.fromkeys(y for y in fixed + random if y != (0, 0) and inf_norm(y) <= n))

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        verdicts = []
        for n in self.radii:
            graph = build_z2_box(n)
            nw_margin, flow, reciprocity, residual, route = math.inf, 0.0, 0.0, 0.0, 0.0
            flux = 0.0
            for y in self._targets(n, context.rng(self.name, n)):
                report = harmonic_report(graph, (0, 0), y)
                resistance = report.resistance
                if inf_norm(y) >= 2:
                    nw_margin = min(nw_margin, resistance - nash_williams_sum(inf_norm(y)))
                flow = max(flow, current_flow_bound_check(graph, (0, 0), y))
                reciprocity = max(reciprocity, abs(resistance - effective_resistance(graph, y, (0, 0))))
                residual = max(residual, report.interior_residual)
                flux = max(flux, report.divergence_error)
                other = solve_harmonic(graph, (0, 0), y, "cg")
                route = max(route, float(np.max(np.abs(report.v - other))))
                if n <= self.dense_max_radius:
                    dense = solve_harmonic(graph, (0, 0), y, "dense")
                    route = max(route, float(np.max(np.abs(report.v - dense))))
            if math.isfinite(nw_margin):
                verdicts.append(self.at_least(f"box N={n}: R - Nash-Williams sum", nw_margin, 0.0))
            verdicts.append(self.at_most(f"box N={n}: max R|∇v|", flow, 1.0, 1e-8))
            verdicts.append(self.at_most(f"box N={n}: |R(0,y) - R(y,0)|", reciprocity, 0.0, 1e-10))
            verdicts.append(self.at_most(f"box N={n}: interior divergence", residual, 0.0, 1e-10))
            verdicts.append(self.at_most(f"box N={n}: |div v ∓ 1/R| at 0 and y", flux, 0.0, 1e-8))
            verdicts.append(self.at_most(f"box N={n}: solve routes disagree by", route, 0.0, 1e-10))
        return verdicts


class ResistanceMonotonicity(Check):
    """R(0,y) does not decrease as the wired box grows."""

    suite = "deformation"
    reference = "Rayleigh monotonicity under the wired boundary"

    def __init__(self, ys: list[list[int]] | None = None, max_radius: int = 8):
        super().__init__()
        self.ys = ys or [[1, 0], [2, 0], [2, 2]]
        self.max_radius = max_radius

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        verdicts = []
        for y in self.ys:
            scan = resistance_monotonicity_scan(tuple(y), list(range(1, self.max_radius + 1)))
            steps = np.diff(scan.resistances)
            smallest = float(steps.min()) if len(steps) else 0.0
            verdicts.append(
                self.verdict(
                    f"y={tuple(y)}, N in {scan.radii[0]}..{scan.radii[-1]}: smallest increment",
                    smallest,
                    0.0,
                    1e-12,
                    PASS if scan.nondecreasing else FAIL,
                    {"resistances": list(scan.resistances)},
                )
            )
        return verdicts


class NashWilliamsAsymptotics(Check):
    """Small values of the Nash-Williams sum and its ⅛ ln|y| growth."""

    suite = "deformation"
    reference = "Σ 1/(4(2k+1)) ∼ ⅛ ln|y|_∞"

    def __init__(self, large_norm: int = 1000, relative_tolerance: float = 0.1):
        super().__init__()
        self.large_norm = large_norm
        self.relative_tolerance = relative_tolerance

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        ratio = nash_williams_sum(self.large_norm) / math.log(self.large_norm)
        try:
            nash_williams_sum(1)
            rejected = False
        except ValueError:
            rejected = True
        return [
            self.close("|y|=2", nash_williams_sum(2), 1.0 / 12.0, 1e-15),
            self.close("|y|=3", nash_williams_sum(3), 2.0 / 15.0, 1e-15),
            self.close(
                f"|y|={self.large_norm}: sum / ln|y|",
                ratio,
                ASYMPTOTIC_C0,
                self.relative_tolerance * ASYMPTOTIC_C0,
            ),
            self.verdict("|y|=1 rejected", float(rejected), 1.0, 0.0, PASS if rejected else FAIL),
        ]


class PlanConstants(Check):
    """Arithmetic of q, γ̃, η and the plan invariants on a box."""

    suite = "deformation"
    reference = "γ̃ = s/(4q²(W̄+1)), η = c₀s²/(8q²(W̄+1))"

    def __init__(self, box_n: int = 3):
        super().__init__()
        self.box_n = box_n

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        graph = build_z2_box(self.box_n)
        plan = build_plan(graph, (2, 0), 0.5, 1.0)
        problems = plan.problems(graph)
        return [
            self.close("s=1/2, W̄=1: q", plan.q, 2.0, 0.0),
            self.close("s=1/2, W̄=1: γ̃", plan.gamma_tilde, 1.0 / 64.0, 1e-15),
            self.close("s=1/2, W̄=1, c₀=1/8: η", plan.eta_asymptotic, 1.0 / 2048.0, 1e-15),
            self.close("s + 1/q", plan.s + 1.0 / plan.q, 1.0, 0.0),
            self.close("γ′ = -γ(q-1)", plan.gamma_prime, -plan.gamma * (plan.q - 1.0), 0.0),
            self.verdict(
                f"box N={self.box_n}, y=(2,0): plan invariants violated",
                len(problems),
                0.0,
                0.0,
                PASS if not problems else FAIL,
                {"problems": problems},
            ),
        ]


class Lemma1Bound(Check):
    """Monte Carlo E[e^{s u_y}] against the deformation bound on boxes and the triangle."""

    suite = "deformation"
    reference = "E[e^{s u_y}] ≤ exp(-γs + γ²q²Σ(W+1)|∇v|²) ≤ exp(-R s²/(8q²(W̄+1)))"

    def __init__(
        self,
        radii: list[int] | None = None,
        ys: list[list[int]] | None = None,
        s: float = 0.5,
        wbar: float = 1.0,
        n_samples: int = 4000,
        triangle_samples: int = 20000,
    ):
        super().__init__()
        self.radii = radii or [3, 4, 5]
        self.ys = ys or [[2, 0], [3, 0], [2, 2]]
        self.s = s
        self.wbar = wbar
        self.n_samples = n_samples
        self.triangle_samples = triangle_samples

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        threshold = context.config.deformation.ess_threshold
        n_batches = context.config.sampler.n_batches
        verdicts = []
        for n in self.radii:
            graph = build_z2_box(n)
            targets = [tuple(y) for y in self.ys if inf_norm(tuple(y)) <= n]
            if not targets:
                continue
            samples = context.samples(graph, context.sampler_config(n_samples=self.n_samples))
            for y in targets:
                plan = build_plan(graph, y, self.s, self.wbar)
                estimate = estimate_exp_moment(samples, y, self.s, n_batches)
                report = lemma1_bound_check(graph, plan, estimate, threshold)
                verdicts.append(
                    self.verdict(
                        f"box N={n}, y={y}, s={self.s}: deformation bound",
                        report.estimate,
                        report.lemma1_bound,
                        3.0 * report.stderr,
                        report.status,
                        report.to_dict(),
                    )
                )
                verdicts.append(
                    self.verdict(
                        f"box N={n}, y={y}, s={self.s}: exp(-R s²/(8q²(W̄+1)))",
                        report.estimate,
                        report.instance_bound,
                        3.0 * report.stderr,
                        classify(report.estimate, report.instance_bound, report.stderr, report.ess, threshold),
                        {"R": plan.resistance},
                    )
                )

        graph = triangle()
        plan = build_plan(graph, 1, self.s, self.wbar)
        samples = context.samples(graph, context.sampler_config(n_samples=self.triangle_samples))
        report = lemma1_bound_check(graph, plan, estimate_exp_moment(samples, 1, self.s, n_batches), threshold)
        verdicts.append(
            self.verdict(
                f"triangle W=1, y=1, s={self.s}",
                report.estimate,
                report.lemma1_bound,
                3.0 * report.stderr,
                report.status,
                report.to_dict(),
            )
        )
        verdicts.append(self.close("γ = 0: bound is 1", lemma1_bound(graph, plan.v, self.s, 0.0), 1.0, 0.0))
        return verdicts


class HypothesisRefusal(Check):
    """No bound is reported when q²γ|∇v| exceeds ½."""

    suite = "deformation"
    reference = "edge condition q²γ|∇v| ≤ ½"

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        graph = path(3)
        v = solve_harmonic(graph, 0, 2)
        # q = 2 at s = 1/2 and |∇v| = 1/2, so γ = 1/4 sits on the boundary
        try:
            lemma1_log_bound(graph, v, 0.5, 0.3)
            refused = False
        except HypothesisViolation:
            refused = True
        boundary = lemma1_log_bound(graph, v, 0.5, 0.25)
        return [
            self.verdict("path n=3, γ beyond the edge condition", float(refused), 1.0, 0.0, PASS if refused else FAIL),
            self.close("path n=3, γ on the boundary: log bound", boundary, 0.375, 1e-15),
        ]
