"""
Mixing Field Density: spanning-tree polynomial and the pinned log-density

All quantities are computed in log space. ln D is the determinant of the
out-degree Laplacian minor (directed matrix-tree theorem), taken by a
subtraction-free elimination on row-scaled arc weights, so fields with large
gradients keep full relative accuracy. The sampler uses the congruent
symmetric matrix instead, which has the same determinant and admits a
Cholesky factor.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from vrjp_lab.framework.errors import FieldOverflowError, HypothesisViolation, StructuralError
from vrjp_lab.graph.core import Graph, edge_gradients, gradients

from .sample import FieldSample, as_field, pinned

# Largest argument with a finite exp() in double precision
LOG_FLOAT_MAX = float(np.log(np.finfo(np.float64).max))

LOG_2PI = float(np.log(2.0 * np.pi))


def arc_log_weights(graph: Graph, u: FieldSample | ArrayLike) -> np.ndarray:
    """ln(W_ij e^{u_j - u_i}) on every directed edge (rows of u broadcast)."""
    log_w = np.log(graph.directed_conductances) + gradients(graph, as_field(graph, u))
    worst = float(np.max(log_w)) if log_w.size else 0.0
    if worst > LOG_FLOAT_MAX:
        raise FieldOverflowError(f"arc weight e^{worst:.1f} overflows double precision")
    return log_w


def _tail_incidence(graph: Graph) -> np.ndarray:
    """Dense (2m, n) one-hot matrix of directed-edge tails."""
    incidence = np.zeros((len(graph.tails), graph.n_vertices))
    incidence[np.arange(len(graph.tails)), graph.tails] = 1.0
    return incidence


def _minor(graph: Graph, matrix: np.ndarray) -> np.ndarray:
    free = graph.free_vertices
    return matrix[..., free[:, None], free]


def scaled_arc_weights(graph: Graph, u: FieldSample | ArrayLike) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Arc weights among non-root vertices, each row divided by its largest arc weight.

    Returns (A, r, log_scale): A[i, j] is the scaled weight of arc i→j
    between non-root vertices, r[i] that of arc i→root, and log_scale[i]
    the log of the divisor. The out-degree Laplacian minor is
    diag(e^{log_scale}) (diag(A·1 + r) - A). Stacks (..., n) broadcast.
    """
    log_w = arc_log_weights(graph, u)
    n = graph.n_vertices
    log_matrix = np.full(log_w.shape[:-1] + (n, n), -np.inf)
    log_matrix[..., graph.tails, graph.heads] = log_w
    log_scale = np.max(log_matrix, axis=-1)
    weights = np.exp(log_matrix - log_scale[..., None])
    free = graph.free_vertices
    return _minor(graph, weights), weights[..., free, graph.root], log_scale[..., free]


def _eliminate(off_diagonal: np.ndarray, excess: np.ndarray) -> np.ndarray:
    """ln det(diag(A·1 + r) - A) for nonnegative A (zero diagonal) and r.

    Gaussian elimination in which every pivot is recomputed as the sum of
    the remaining off-diagonal weights and the row excess, so no step
    subtracts. Relative accuracy holds however far apart the weights are.
    """
    a = np.array(off_diagonal, dtype=np.float64)
    r = np.array(excess, dtype=np.float64)
    m = a.shape[-1]
    diag = np.arange(m)
    log_det = np.zeros(a.shape[:-2])
    for k in range(m):
        pivot = np.asarray(a[..., k, :].sum(axis=-1) + r[..., k])
        if np.any(pivot <= 0) or not np.all(np.isfinite(pivot)):
            raise FieldOverflowError("arc weights span more than double precision; ln D underflows")
        log_det += np.log(pivot)
        share = a[..., :, k] / pivot[..., None]
        a += share[..., :, None] * a[..., k, None, :]
        r += share * r[..., k, None]
        a[..., k, :] = 0.0
        a[..., :, k] = 0.0
        a[..., diag, diag] = 0.0
    return log_det


def symmetric_tree_matrix(graph: Graph, u: FieldSample | ArrayLike) -> np.ndarray:
    """H = diag(Σ_j W_ij e^{u_j-u_i}) - W on the non-root vertices.

    H is the diagonal similarity E L E^{-1} (E = diag e^u) of the out-degree
    Laplacian minor L, hence symmetric positive definite with det H = D.
    """
    w = np.exp(arc_log_weights(graph, u))
    n = graph.n_vertices
    matrix = np.zeros(w.shape[:-1] + (n, n))
    matrix[..., graph.tails, graph.heads] = -graph.directed_conductances
    diag = np.arange(n)
    matrix[..., diag, diag] = w @ _tail_incidence(graph)
    return _minor(graph, matrix)


def tree_polynomial_batch(graph: Graph, U: ArrayLike) -> np.ndarray:
    """ln D for every row of U (shape (P, n))."""
    off_diagonal, excess, log_scale = scaled_arc_weights(graph, U)
    return np.sum(log_scale, axis=-1) + _eliminate(off_diagonal, excess)


def tree_polynomial(graph: Graph, u: FieldSample | ArrayLike) -> float:
    """ln D_{i₀}(W, u), the log of the weighted count of arborescences toward the root.

    Args:
        graph: Connected graph
        u: Field pinned at the root

    Returns:
        ln D as a float

    Raises:
        FieldOverflowError: If an arc weight overflows or ln D underflows
    """
    return float(tree_polynomial_batch(graph, u))


def tree_polynomial_cholesky(graph: Graph, u: FieldSample | ArrayLike) -> float:
    """ln D from the Cholesky factor of the symmetric form."""
    try:
        factor = np.linalg.cholesky(symmetric_tree_matrix(graph, u))
    except np.linalg.LinAlgError:
        raise StructuralError("symmetric tree matrix is not positive definite") from None
    return float(2.0 * np.sum(np.log(np.diagonal(factor, axis1=-2, axis2=-1)), axis=-1))


def energy_batch(graph: Graph, U: ArrayLike) -> np.ndarray:
    """Σ_{i→j} W_ij (e^{∇u_ij} - 1) per row."""
    U = as_field(graph, U)
    arc_log_weights(graph, U)
    return np.sum(graph.directed_conductances * np.expm1(gradients(graph, U)), axis=-1)


def log_density_batch(graph: Graph, U: ArrayLike) -> np.ndarray:
    """Vectorised log-density over the rows of U."""
    U = as_field(graph, U)
    constant = -0.5 * (graph.n_vertices - 1) * LOG_2PI
    return constant - 0.5 * energy_batch(graph, U) + 0.5 * tree_polynomial_batch(graph, U)


def log_density(graph: Graph, u: FieldSample | ArrayLike) -> float:
    """Exact log of the normalised mixing-field density at u (includes (2π)^{-(|V|-1)/2})."""
    values = as_field(graph, u)
    if values.ndim != 1:
        raise ValueError("log_density takes a single field; use log_density_batch for stacks")
    return float(log_density_batch(graph, values[None, :])[0])


def rn_ratio(graph: Graph, u: FieldSample | ArrayLike, v: ArrayLike, gamma: float) -> float:
    """ln dQ/dQ^γ at u for the shift ũ = u - γv.

    Equals ½ Σ_{i→j} W e^{∇u}(e^{γ∇v} - 1) + ½ (ln D(u) - ln D(u + γv)), which
    is log_density(u) - log_density(u + γv).
    """
    U = as_field(graph, u)
    V = pinned(np.asarray(v, dtype=np.float64), graph.root, "v")
    if gamma == 0.0:
        return 0.0
    log_w = arc_log_weights(graph, U)
    tilt = 0.5 * float(np.sum(np.exp(log_w) * np.expm1(gamma * gradients(graph, V))))
    return tilt + 0.5 * (tree_polynomial(graph, U) - tree_polynomial(graph, U + gamma * V))


def log_tree_polynomial_derivatives(graph: Graph, u: FieldSample | ArrayLike, v: ArrayLike) -> tuple[float, float]:
    """First and second γ-derivatives of ln D(W, u + γv) at γ = 0.

    Only the diagonal of the symmetric tree matrix depends on γ, so
    d/dγ ln det H = tr(H⁻¹H') and d²/dγ² = tr(H⁻¹H'') - tr(H⁻¹H'H⁻¹H').
    The second derivative is the variance of Σ_T ∇v under the arborescence law.
    """
    U = as_field(graph, u)
    V = pinned(np.asarray(v, dtype=np.float64), graph.root, "v")
    w = np.exp(arc_log_weights(graph, U))
    grad_v = gradients(graph, V)
    incidence = _tail_incidence(graph)
    free = graph.free_vertices
    d1 = ((w * grad_v) @ incidence)[free]
    d2 = ((w * grad_v**2) @ incidence)[free]

    h_inv = np.linalg.inv(symmetric_tree_matrix(graph, U))
    h_inv = 0.5 * (h_inv + h_inv.T)
    diag = np.diag(h_inv)
    first = float(diag @ d1)
    second = float(diag @ d2 - d1 @ (h_inv * h_inv) @ d1)
    return first, second


@dataclass(frozen=True)
class TiltedWeights:
    """W̃_ij = W_ij (1 - h_ij) with h_ij = 2q³γ²|∇v_ij|², per undirected edge."""

    values: np.ndarray
    base: np.ndarray
    factors: np.ndarray

    @property
    def min_ratio(self) -> float:
        return float(np.min(self.values / self.base))

    @property
    def satisfies_half_bound(self) -> bool:
        return bool(np.all(self.values >= 0.5 * self.base * (1.0 - 1e-12)))

    def graph(self, graph: Graph) -> Graph:
        if np.any(self.values <= 0):
            raise HypothesisViolation("tilted weights are not positive; hypothesis q²γ|∇v| ≤ ½ fails")
        return graph.with_conductances(self.values)


def tilted_weights(graph: Graph, v: ArrayLike, q: float, gamma: float) -> TiltedWeights:
    """Build W̃ for a deformation v at exponent q and strength γ."""
    grad = edge_gradients(graph, pinned(np.asarray(v, dtype=np.float64), graph.root, "v"))
    factors = 2.0 * q**3 * gamma**2 * grad**2
    base = np.array(graph.conductances)
    return TiltedWeights(values=base * (1.0 - factors), base=base, factors=factors)


@dataclass(frozen=True)
class RatioBound:
    """ln D(W,u) - ln D(W̃,u) against its product and exponential bounds.

    For h ≤ ½, -ln(1-h) ≤ 2 ln2 · h, so the exponential bound carries the
    factor 2 ln2 on Σ_E h = Σ_{i→j} q³γ²|∇v|². `log_plain_bound` is Σ_E h
    without it, which the product bound always exceeds when some h > 0.
    """

    log_ratio: float
    log_product_bound: float
    log_exp_bound: float
    log_plain_bound: float

    @property
    def holds(self) -> bool:
        return self.log_ratio <= self.log_product_bound + 1e-10 and self.log_product_bound <= self.log_exp_bound + 1e-12


def tree_polynomial_ratio_bound(
    graph: Graph, u: FieldSample | ArrayLike, v: ArrayLike, q: float, gamma: float
) -> RatioBound:
    """Check D(W,u)/D(W̃,u) ≤ Π_E (1 - h)^{-1} ≤ exp(2 ln2 Σ_{i→j} q³γ²|∇v|²)."""
    tilted = tilted_weights(graph, v, q, gamma)
    log_ratio = tree_polynomial(graph, u) - tree_polynomial(tilted.graph(graph), u)
    return RatioBound(
        log_ratio=log_ratio,
        log_product_bound=float(-np.sum(np.log1p(-tilted.factors))),
        log_exp_bound=2.0 * math.log(2.0) * float(np.sum(tilted.factors)),
        log_plain_bound=float(np.sum(tilted.factors)),
    )
