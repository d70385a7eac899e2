"""
Deformation Bounds: numerical checks of the inequalities behind moment decay

Covers the second-order Taylor bound, convexity of γ ↦ ln D(W, u + γv), its
Hölder-combination consequence, and the exponential-moment bound with its
comparison against Monte Carlo estimates.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from vrjp_lab.field.arborescence import arborescence_law
from vrjp_lab.field.density import tree_polynomial
from vrjp_lab.field.sample import as_field, pinned
from vrjp_lab.framework.errors import HypothesisViolation
from vrjp_lab.framework.report.models import FAIL, INCONCLUSIVE, PASS
from vrjp_lab.graph.core import Graph, gradients
from vrjp_lab.sampler.estimate import MomentEstimate

from .plan import DeformationPlan, conjugate_exponent

ENUMERATION_LIMIT = 5


def taylor_remainder_check(q: float, gamma: float, t: float) -> bool:
    """|(1-1/q)e^{qγt} + 1/q - e^{(q-1)γt}| ≤ 2q²γ²t² ≤ ½, given q²γ|t| ≤ ½.

    Raises:
        HypothesisViolation: Outside q²γ|t| ≤ ½, where the bound is not claimed
    """
    if q <= 1:
        raise ValueError(f"q must exceed 1, got {q}")
    x = gamma * t
    if q**2 * abs(x) > 0.5 * (1.0 + 1e-12):
        raise HypothesisViolation(f"q²γ|t| = {q**2 * abs(x):.6f} exceeds 1/2")
    # first-order terms (1-1/q)·qx and (q-1)·x coincide
    if abs((1.0 - 1.0 / q) * q * x - (q - 1.0) * x) > 1e-12 * q * max(1.0, abs(x)):
        return False
    remainder = abs((1.0 - 1.0 / q) * math.expm1(q * x) - math.expm1((q - 1.0) * x))
    quadratic = 2.0 * q**2 * x**2
    # slack for rounding in the cancelling first-order terms
    rounding = 8.0 * np.finfo(np.float64).eps * q * abs(x) + 1e-300
    return remainder <= quadratic * (1.0 + 1e-12) + rounding and quadratic <= 0.5 + 1e-12


@dataclass(frozen=True)
class TaylorScan:
    n_points: int
    n_violations: int
    max_ratio: float


def taylor_grid_scan(q_values: ArrayLike, n_points: int = 201) -> TaylorScan:
    """Scan q²γ|t| ∈ [0, ½] (boundary included) for every q; ratio is remainder / 2q²γ²t²."""
    violations, total, worst = 0, 0, 0.0
    for q in np.asarray(q_values, dtype=np.float64):
        for x in np.linspace(-0.5, 0.5, n_points) / q**2:
            total += 1
            if not taylor_remainder_check(float(q), 1.0, float(x)):
                violations += 1
            if x != 0:
                remainder = abs((1.0 - 1.0 / q) * math.expm1(q * x) - math.expm1((q - 1.0) * x))
                worst = max(worst, remainder / (2.0 * q**2 * x**2))
    return TaylorScan(n_points=total, n_violations=violations, max_ratio=worst)


@dataclass(frozen=True)
class ConvexityResult:
    """Second differences of γ ↦ ln D(W, u + γv) on a grid.

    min_second_difference is the smallest f(γ+h) - 2f(γ) + f(γ-h).
    second_derivatives are Richardson-refined. variance_error compares them
    with the enumerated arborescence variance (NaN when not enumerated).
    """

    gammas: np.ndarray
    min_second_difference: float
    second_derivatives: np.ndarray
    variances: np.ndarray | None
    variance_error: float

    @property
    def convex(self) -> bool:
        return self.min_second_difference >= -1e-8


def convexity_check(
    graph: Graph,
    u: ArrayLike,
    v: ArrayLike,
    gammas: ArrayLike,
    h: float = 1e-3,
) -> ConvexityResult:
    """Central second differences of ln D along u + γv, plus the variance identity on small graphs."""
    base = as_field(graph, u)
    direction = pinned(np.asarray(v, dtype=np.float64), graph.root, "v")
    gammas = np.asarray(gammas, dtype=np.float64)

    def f(gamma: float) -> float:
        return tree_polynomial(graph, base + gamma * direction)

    differences, derivatives = [], []
    for gamma in gammas:
        centre = f(gamma)
        coarse = f(gamma + h) - 2.0 * centre + f(gamma - h)
        fine = f(gamma + h / 2) - 2.0 * centre + f(gamma - h / 2)
        differences.extend([coarse, fine])
        derivatives.append((4.0 * fine / (h / 2) ** 2 - coarse / h**2) / 3.0)
    derivatives = np.array(derivatives)

    variances, error = None, math.nan
    if graph.n_vertices <= ENUMERATION_LIMIT:
        variances = np.array([arborescence_law(graph, base + g * direction, direction).variance for g in gammas])
        error = float(np.max(np.abs(derivatives - variances)))
    return ConvexityResult(
        gammas=gammas,
        min_second_difference=float(min(differences)),
        second_derivatives=derivatives,
        variances=variances,
        variance_error=error,
    )


def holder_combination_check(graph: Graph, u: ArrayLike, v: ArrayLike, q: float, gamma: float) -> float:
    """(1-1/q) ln D(u+γv) + (1/q) ln D(u+γ′v) - ln D(u) with γ′ = -γ(q-1); nonnegative by convexity."""
    base = as_field(graph, u)
    direction = pinned(np.asarray(v, dtype=np.float64), graph.root, "v")
    gamma_prime = -gamma * (q - 1.0)
    return (
        (1.0 - 1.0 / q) * tree_polynomial(graph, base + gamma * direction)
        + tree_polynomial(graph, base + gamma_prime * direction) / q
        - tree_polynomial(graph, base)
    )


def lemma1_log_bound(graph: Graph, v: ArrayLike, s: float, gamma: float) -> float:
    """-γs + γ²q² Σ_{i→j} (W_ij + 1)|∇v_ij|², valid when q²γ|∇v| ≤ ½ on every edge.

    Raises:
        HypothesisViolation: When the edge condition fails
    """
    q = conjugate_exponent(s)
    grad = gradients(graph, pinned(np.asarray(v, dtype=np.float64), graph.root, "v"))
    if q**2 * abs(gamma) * float(np.max(np.abs(grad))) > 0.5 + 1e-12:
        raise HypothesisViolation("q²γ|∇v| exceeds 1/2 on some edge; no bound is claimed")
    return -gamma * s + gamma**2 * q**2 * float(np.sum((graph.directed_conductances + 1.0) * grad**2))


def lemma1_bound(graph: Graph, v: ArrayLike, s: float, gamma: float) -> float:
    """Upper bound on E[e^{s u_y}] for any admissible v with v(root)=0, v(y)=1."""
    return math.exp(lemma1_log_bound(graph, v, s, gamma))


@dataclass(frozen=True)
class Lemma1Report:
    """Monte Carlo estimate of E[e^{s u_y}] against the deformation bounds."""

    y: object
    s: float
    gamma: float
    resistance: float
    lemma1_bound: float
    instance_bound: float
    estimate: float
    stderr: float
    ess: float
    status: str

    def to_dict(self) -> dict:
        return {
            "y": list(self.y) if isinstance(self.y, tuple) else self.y,
            "s": self.s,
            "gamma": self.gamma,
            "R": self.resistance,
            "lemma1_bound": self.lemma1_bound,
            "instance_bound": self.instance_bound,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "ess": self.ess,
            "status": self.status,
        }


def classify(estimate: float, bound: float, stderr: float, ess: float, ess_threshold: float) -> str:
    """pass if estimate ≤ bound + 3σ; inconclusive when σ is missing or ESS is below threshold."""
    if not math.isfinite(stderr) or not ess >= ess_threshold:
        return INCONCLUSIVE
    return PASS if estimate <= bound + 3.0 * stderr else FAIL


def lemma1_bound_check(
    graph: Graph,
    plan: DeformationPlan,
    estimate: MomentEstimate,
    ess_threshold: float = 200.0,
) -> Lemma1Report:
    """Compare an estimate of E[e^{s u_y}] with the bound at the planned γ and with exp(-R s²/(8q²(W̄+1)))."""
    if estimate.s != plan.s or graph.index(estimate.y) != graph.index(plan.y):
        raise ValueError("estimate and plan refer to different (y, s)")
    bound = lemma1_bound(graph, plan.v, plan.s, plan.gamma)
    return Lemma1Report(
        y=plan.y,
        s=plan.s,
        gamma=plan.gamma,
        resistance=plan.resistance,
        lemma1_bound=bound,
        instance_bound=plan.instance_bound,
        estimate=estimate.estimate,
        stderr=estimate.stderr,
        ess=estimate.ess,
        status=classify(estimate.estimate, bound, estimate.stderr, estimate.ess, ess_threshold),
    )
