"""
Quadrature Oracles: tensor-grid integration of the mixing-field density

Trapezoid rule on [-L, L] per free coordinate (L = 40). The integrands decay
doubly exponentially, so the rule converges very fast in the spacing; the
spacing is halved until two successive values agree (Richardson comparison).
Limited to three free coordinates.
"""

import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import cumulative_trapezoid
from scipy.special import logsumexp

from vrjp_lab.framework.errors import QuadratureDimensionError
from vrjp_lab.graph.core import Graph, Label

from .density import log_density_batch
from .sample import pinned

logger = logging.getLogger(__name__)

HALF_WIDTH = 40.0
MAX_FREE_COORDINATES = 3

LogIntegrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value at the finest spacing used and the last Richardson change."""

    value: float
    spacing: float
    change: float
    n_points: int


def _axis(half_width: float, spacing: float) -> np.ndarray:
    k = int(round(half_width / spacing))
    return np.arange(-k, k + 1) * spacing


def _index_blocks(dim: int, size: int, chunk_points: int) -> Iterator[np.ndarray]:
    """Integer grid indices (B, dim) over {0..size-1}^dim in row-major blocks."""
    if dim == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    if dim == 1:
        rest = np.zeros((1, 0), dtype=np.int64)
    else:
        rest = np.stack(np.meshgrid(*[np.arange(size)] * (dim - 1), indexing="ij"), axis=-1).reshape(-1, dim - 1)
    rows = max(1, chunk_points // len(rest))
    for start in range(0, size, rows):
        first = np.arange(start, min(start + rows, size))
        yield np.concatenate([np.repeat(first, len(rest))[:, None], np.tile(rest, (len(first), 1))], axis=1)


def _check_dimension(graph: Graph) -> int:
    dim = graph.n_vertices - 1
    if dim > MAX_FREE_COORDINATES:
        raise QuadratureDimensionError(
            f"quadrature supports at most {MAX_FREE_COORDINATES} free coordinates, graph has {dim}"
        )
    return dim


def integrate_on_grid(
    graph: Graph,
    log_integrand: LogIntegrand,
    spacing: float,
    half_width: float = HALF_WIDTH,
    chunk_points: int = 1 << 18,
) -> float:
    """Trapezoid rule for ∫ exp(log_integrand(u)) du over the free coordinates at one spacing."""
    dim = _check_dimension(graph)
    axis = _axis(half_width, spacing)
    free = graph.free_vertices
    partial_sums = []
    for block in _index_blocks(dim, len(axis), chunk_points):
        U = np.zeros((len(block), graph.n_vertices))
        U[:, free] = axis[block]
        partial_sums.append(float(np.sum(np.exp(log_integrand(U)))))
    return math.fsum(partial_sums) * spacing**dim


def grid_integral(
    graph: Graph,
    log_integrand: LogIntegrand,
    tolerance: float = 1e-10,
    initial_spacing: float = 0.5,
    half_width: float = HALF_WIDTH,
    max_halvings: int = 3,
    max_points: float = 4e7,
) -> QuadratureResult:
    """Integrate with spacing halving until successive values change by less than tolerance.

    Args:
        graph: Graph whose free coordinates span the domain
        log_integrand: Vectorised log of the integrand on rows of U (P, n)
        tolerance: Stop once |I(h/2) - I(h)| < tolerance · max(1, |I|)
        initial_spacing: First spacing h
        half_width: Domain half-width L
        max_halvings: Refinement cap
        max_points: Grid-size cap; refinement stops before exceeding it

    Returns:
        QuadratureResult at the finest spacing reached
    """
    dim = _check_dimension(graph)
    spacing = initial_spacing
    previous = integrate_on_grid(graph, log_integrand, spacing, half_width)
    change = math.nan
    for _ in range(max_halvings):
        n_points = (2 * round(half_width / (spacing / 2)) + 1) ** dim
        if n_points > max_points:
            logger.warning("Quadrature stopped at h=%g: next grid has %d points", spacing, n_points)
            break
        spacing /= 2
        current = integrate_on_grid(graph, log_integrand, spacing, half_width)
        change = abs(current - previous)
        previous = current
        if change < tolerance * max(1.0, abs(current)):
            break
    n_points = (2 * round(half_width / spacing) + 1) ** dim
    return QuadratureResult(value=previous, spacing=spacing, change=change, n_points=n_points)


def normalization_oracle(graph: Graph, **kwargs) -> QuadratureResult:
    """Total mass of the mixing-field density."""
    return grid_integral(graph, lambda U: log_density_batch(graph, U), **kwargs)


def exp_moment_oracle(graph: Graph, y: Label, s: float = 1.0, **kwargs) -> float:
    """∫ e^{s u_y} Q(du) by quadrature."""
    j = graph.index(y)
    if j == graph.root:
        return 1.0
    return grid_integral(graph, lambda U: log_density_batch(graph, U) + s * U[:, j], **kwargs).value


def exp_moment_identity_oracle(graph: Graph, j0: Label, **kwargs) -> float:
    """∫ e^{u_{j₀}} Q(du); equals 1 for every j₀."""
    return exp_moment_oracle(graph, j0, 1.0, **kwargs)


def tilted_moment_oracle(graph: Graph, y: Label, v: ArrayLike, gamma: float, **kwargs) -> float:
    """E^{Q^γ}(e^{u_y}) where Q^γ is the law of u - γv, integrated through its shifted density."""
    j = graph.index(y)
    shift = gamma * pinned(np.asarray(v, dtype=np.float64), graph.root, "v")
    return grid_integral(graph, lambda U: log_density_batch(graph, U + shift) + U[:, j], **kwargs).value


def quenched_first_step_oracle(graph: Graph, start: Label | None = None, **kwargs) -> dict[Label, float]:
    """E_Q[W_{i₀,j} e^{u_j} / Σ_ℓ W_{i₀,ℓ} e^{u_ℓ}] for every neighbour j of the start vertex."""
    i0 = graph.root if start is None else graph.index(start)
    neighbours, weights = graph.neighbors(i0)
    log_w = np.log(weights)
    result = {}
    for j, lw in zip(neighbours, log_w, strict=True):

        def log_integrand(U: np.ndarray, j=j, lw=lw) -> np.ndarray:
            normaliser = logsumexp(log_w[None, :] + U[:, neighbours], axis=1)
            return log_density_batch(graph, U) + lw + U[:, j] - normaliser

        result[graph.labels[j]] = grid_integral(graph, log_integrand, **kwargs).value
    return result


def marginal_cdf(
    graph: Graph,
    vertex: Label,
    spacing: float = 0.01,
    half_width: float = HALF_WIDTH,
) -> tuple[np.ndarray, np.ndarray]:
    """Grid and CDF of the marginal law of u_vertex.

    Returns:
        (grid, cdf) with cdf normalised to end at 1
    """
    dim = _check_dimension(graph)
    j = graph.index(vertex)
    free = graph.free_vertices.tolist()
    if j == graph.root:
        raise ValueError("the root coordinate is pinned at 0")
    position = free.index(j)
    axis = _axis(half_width, spacing)
    density = np.zeros(len(axis))
    for block in _index_blocks(dim, len(axis), 1 << 18):
        U = np.zeros((len(block), graph.n_vertices))
        U[:, free] = axis[block]
        np.add.at(density, block[:, position], np.exp(log_density_batch(graph, U)))
    cdf = cumulative_trapezoid(density, axis, initial=0.0)
    return axis, cdf / cdf[-1]
