"""
Deformation Plan: the tilt u → u - γv along a harmonic potential

For s ∈ (0, 1) and q = 1/(1 - s) the tilt strength is γ = γ̃·R(0, y) with
γ̃ = s/(4q²(W̄+1)), which maximises γ̃s - 2γ̃²q²(W̄+1). The resulting bound
on E[e^{s u_y}] is exp(-R(0, y) s² / (8q²(W̄+1))).
"""

import math
from dataclasses import dataclass

import numpy as np

from vrjp_lab.framework.errors import HypothesisViolation
from vrjp_lab.graph.core import Graph, Label, dirichlet_energy, edge_gradients

from .harmonic import inf_norm, nash_williams_sum, solve_harmonic

ASYMPTOTIC_C0 = 0.125


def conjugate_exponent(s: float) -> float:
    """q with s + 1/q = 1."""
    if not 0 < s < 1:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    return 1.0 / (1.0 - s)


def decay_exponent(c0: float, s: float, wbar: float) -> float:
    """η = c₀ s² / (8 q² (W̄ + 1))."""
    q = conjugate_exponent(s)
    return c0 * s**2 / (8.0 * q**2 * (wbar + 1.0))


@dataclass(frozen=True)
class DeformationPlan:
    """Harmonic deformation toward y and the constants derived from it."""

    y: Label
    v: np.ndarray
    energy: float
    resistance: float
    s: float
    q: float
    gamma_tilde: float
    gamma: float
    gamma_prime: float
    wbar: float
    y_inf_norm: int | None
    c0_instance: float | None
    eta_instance: float | None
    eta_asymptotic: float
    max_gradient: float

    @property
    def log_instance_bound(self) -> float:
        """-R s² / (8 q² (W̄+1))."""
        return -self.resistance * self.s**2 / (8.0 * self.q**2 * (self.wbar + 1.0))

    @property
    def instance_bound(self) -> float:
        return math.exp(self.log_instance_bound)

    @property
    def polynomial_bound(self) -> float | None:
        """|y|_∞^{-η} with the instance constant; informational only."""
        if self.eta_instance is None or self.y_inf_norm is None:
            return None
        return float(self.y_inf_norm ** (-self.eta_instance))

    def problems(self, graph: Graph) -> list[str]:
        found = []
        if self.v[graph.root] != 0.0 or abs(self.v[graph.index(self.y)] - 1.0) > 0:
            found.append("boundary values v(root)=0, v(y)=1 violated")
        if not self.q > 1 or abs(self.s + 1.0 / self.q - 1.0) > 1e-15:
            found.append("q is not the conjugate exponent of s")
        if self.gamma_tilde > 1.0 / (2.0 * self.q**2):
            found.append("γ̃ exceeds 1/(2q²)")
        if self.q**2 * self.gamma * self.max_gradient > 0.5 + 1e-12:
            found.append("q²γ|∇v| exceeds 1/2 on some edge")
        if abs(self.energy * self.resistance - 1.0) > 1e-10:
            found.append("E(v,v)·R differs from 1")
        return found


def build_plan(graph: Graph, y: Label, s: float, wbar: float, method: str = "direct") -> DeformationPlan:
    """Solve for v between the root and y and derive q, γ̃, γ, γ′ and η.

    Args:
        graph: Connected graph rooted at 0
        y: Target vertex (≠ root)
        s: Moment exponent in (0, 1)
        wbar: Upper bound W̄ on the per-lattice-edge conductance
        method: Linear-solve route for the potential

    Returns:
        DeformationPlan

    Raises:
        ValueError: If s ∉ (0, 1) or W̄ is below the largest conductance
        HypothesisViolation: If the tilt would break q²γ|∇v| ≤ ½
    """
    q = conjugate_exponent(s)
    if wbar < graph.max_unit_conductance * (1.0 - 1e-12):
        raise ValueError(f"W̄={wbar} is below the largest conductance {graph.max_unit_conductance}")
    if graph.index(y) == graph.root:
        raise ValueError("target y coincides with the root")

    v = solve_harmonic(graph, graph.root_label, y, method)
    energy = dirichlet_energy(graph, v)
    resistance = 1.0 / energy
    gamma_tilde = s / (4.0 * q**2 * (wbar + 1.0))
    gamma = gamma_tilde * resistance
    max_gradient = float(np.max(np.abs(edge_gradients(graph, v))))
    if q**2 * gamma * max_gradient > 0.5 + 1e-12:
        raise HypothesisViolation(f"q²γ max|∇v| = {q**2 * gamma * max_gradient:.4f} exceeds 1/2")

    y_inf = inf_norm(y) if isinstance(y, tuple) else None
    c0 = nash_williams_sum(y_inf) / math.log(y_inf) if y_inf is not None and y_inf >= 2 else None
    return DeformationPlan(
        y=y,
        v=v,
        energy=energy,
        resistance=resistance,
        s=s,
        q=q,
        gamma_tilde=gamma_tilde,
        gamma=gamma,
        gamma_prime=-gamma * (q - 1.0),
        wbar=wbar,
        y_inf_norm=y_inf,
        c0_instance=c0,
        eta_instance=None if c0 is None else decay_exponent(c0, s, wbar),
        eta_asymptotic=decay_exponent(ASYMPTOTIC_C0, s, wbar),
        max_gradient=max_gradient,
    )


def gamma_tilde_optimum(s: float, wbar: float, n_grid: int = 100_001) -> tuple[float, float]:
    """Grid maximiser of γ̃s - 2γ̃²q²(W̄+1) over (0, 1/(2q²)] next to the closed form.

    Returns:
        (grid argmax, closed-form s/(4q²(W̄+1)))
    """
    q = conjugate_exponent(s)
    grid = np.linspace(0.0, 1.0 / (2.0 * q**2), n_grid)[1:]
    exponent = grid * s - 2.0 * grid**2 * q**2 * (wbar + 1.0)
    return float(grid[np.argmax(exponent)]), s / (4.0 * q**2 * (wbar + 1.0))
