"""
Harmonic Deformation: potentials, effective resistance and resistance bounds

The Laplacian uses one unit of conductance per lattice edge, so merged
boundary edges of a wired box count with their multiplicity. The boundary
vertex δ_N is an ordinary interior vertex of the Dirichlet problem.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import cg, spsolve

from vrjp_lab.framework.errors import StructuralError
from vrjp_lab.graph.core import Graph, Label, build_z2_box, dirichlet_energy, edge_gradients

logger = logging.getLogger(__name__)

SOLVE_METHODS = ("direct", "cg", "dense")


def solve_harmonic(graph: Graph, a: Label, y: Label, method: str = "direct") -> np.ndarray:
    """Potential v with v(a) = 0, v(y) = 1, harmonic at every other vertex.

    Args:
        graph: Connected graph
        a: Vertex held at 0
        y: Vertex held at 1
        method: "direct" (sparse LU), "cg" (conjugate gradients) or "dense" (numpy solve)

    Returns:
        v in dense-index order

    Raises:
        StructuralError: If the reduced system cannot be solved
    """
    ia, iy = graph.index(a), graph.index(y)
    if ia == iy:
        raise ValueError("source and target of a harmonic potential must differ")
    if method not in SOLVE_METHODS:
        raise ValueError(f"unknown solve method {method!r}; available: {SOLVE_METHODS}")

    v = np.zeros(graph.n_vertices)
    v[iy] = 1.0
    interior = np.array([i for i in range(graph.n_vertices) if i not in (ia, iy)], dtype=np.int64)
    if len(interior) == 0:
        return v

    laplacian = graph.laplacian()
    reduced = laplacian[interior][:, interior]
    rhs = -laplacian[interior][:, [iy]].toarray().ravel()

    if method == "direct":
        x = spsolve(sp.csc_matrix(reduced), rhs)
    elif method == "cg":
        x, info = cg(reduced, rhs, rtol=1e-13, atol=0.0, maxiter=20 * len(interior))
        if info != 0:
            raise StructuralError(f"conjugate gradients did not converge (info={info})")
    else:
        try:
            x = np.linalg.solve(reduced.toarray(), rhs)
        except np.linalg.LinAlgError:
            raise StructuralError("reduced Laplacian is singular; is the graph connected?") from None

    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if not np.all(np.isfinite(x)):
        raise StructuralError("harmonic solve produced non-finite values; is the graph connected?")
    v[interior] = x
    return v


def divergence(graph: Graph, f: np.ndarray) -> np.ndarray:
    """div(∇f)(z) = Σ_{j∼z} ∇f_{z,j}, counting merged lattice edges with multiplicity."""
    return -(graph.laplacian() @ np.asarray(f, dtype=np.float64))


@dataclass(frozen=True)
class HarmonicReport:
    """Solved potential between a and y and its flow diagnostics."""

    a: int
    y: int
    v: np.ndarray
    energy: float
    interior_residual: float
    source_divergence: float
    sink_divergence: float

    @property
    def resistance(self) -> float:
        return 1.0 / self.energy

    @property
    def divergence_error(self) -> float:
        """Deviation from div = +1/R at a and -1/R at y."""
        r_inv = self.energy
        return max(abs(self.source_divergence - r_inv), abs(self.sink_divergence + r_inv))


def harmonic_report(graph: Graph, a: Label, y: Label, method: str = "direct") -> HarmonicReport:
    v = solve_harmonic(graph, a, y, method)
    ia, iy = graph.index(a), graph.index(y)
    div = divergence(graph, v)
    mask = np.ones(graph.n_vertices, dtype=bool)
    mask[[ia, iy]] = False
    return HarmonicReport(
        a=ia,
        y=iy,
        v=v,
        energy=dirichlet_energy(graph, v),
        interior_residual=float(np.max(np.abs(div[mask]))) if mask.any() else 0.0,
        source_divergence=float(div[ia]),
        sink_divergence=float(div[iy]),
    )


def effective_resistance(graph: Graph, a: Label, y: Label, method: str = "direct") -> float:
    """R(a, y) = 1 / E(v, v), after checking the unit-current divergence identity to 1e-8."""
    report = harmonic_report(graph, a, y, method)
    if report.divergence_error > 1e-8 * max(1.0, report.energy):
        raise StructuralError(f"divergence identity violated by {report.divergence_error:.2e}")
    return report.resistance


def current_flow_bound_check(graph: Graph, a: Label, y: Label, method: str = "direct") -> float:
    """max over lattice edges of R·|∇v|; at most 1 for a unit current flow."""
    report = harmonic_report(graph, a, y, method)
    return float(report.resistance * np.max(np.abs(edge_gradients(graph, report.v))))


def nash_williams_sum(y_inf_norm: int) -> float:
    """Σ_{k=1}^{m-1} 1/(4(2k+1)) for m = |y|_∞ ≥ 2: disjoint square annuli of 4(2k+1) edges."""
    if int(y_inf_norm) != y_inf_norm or y_inf_norm < 2:
        raise ValueError(f"|y|_inf must be an integer >= 2, got {y_inf_norm}")
    return math.fsum(1.0 / (4 * (2 * k + 1)) for k in range(1, int(y_inf_norm)))


def inf_norm(label: Label) -> int:
    if not isinstance(label, tuple):
        raise ValueError(f"|y|_inf needs a lattice site, got {label!r}")
    return max(abs(label[0]), abs(label[1]))


@dataclass(frozen=True)
class MonotonicityScan:
    """R(0, y) on boxes of growing radius."""

    y: tuple[int, int]
    radii: tuple[int, ...]
    resistances: tuple[float, ...]

    @property
    def nondecreasing(self) -> bool:
        return all(b >= a - 1e-12 for a, b in zip(self.resistances, self.resistances[1:], strict=False))


def resistance_monotonicity_scan(y: tuple[int, int], radii: list[int], method: str = "direct") -> MonotonicityScan:
    """R(0, y) on G_N for every N in radii with N ≥ |y|_∞; a decrease is logged, not raised."""
    y = tuple(y)
    usable = [n for n in sorted(radii) if n >= inf_norm(y)]
    resistances = tuple(effective_resistance(build_z2_box(n), (0, 0), y, method) for n in usable)
    scan = MonotonicityScan(y=y, radii=tuple(usable), resistances=resistances)
    if not scan.nondecreasing:
        logger.warning("R(0, %s) decreases with N: %s", y, dict(zip(usable, resistances, strict=True)))
    return scan
