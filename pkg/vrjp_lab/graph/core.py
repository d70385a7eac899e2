"""
Graph Core: finite weighted graphs and the wired Z² box

Vertices carry opaque labels (integers for general graphs and for the
boundary vertex, coordinate pairs for lattice sites) and a dense index
0..|V|-1 used by all linear algebra. Graphs are immutable once built.
"""

import hashlib
from collections.abc import Callable, Iterable, Sequence
from typing import Any

import networkx as nx
import numpy as np
import scipy.sparse as sp
from numpy.typing import ArrayLike
from scipy.sparse.csgraph import connected_components

from vrjp_lab.framework.errors import StructuralError, UnknownVertexError

Label = int | tuple[int, int]

# Label of the wired boundary vertex δ_N
BOUNDARY: Label = -1


class Graph:
    """Finite, connected, simple undirected graph with symmetric positive conductances.

    Each undirected edge is stored once as (i, j) with i < j. Directed-edge
    arrays list every edge twice: position 2e is (i, j) and 2e + 1 is (j, i).

    Attributes:
        labels: Vertex labels in dense-index order
        edges: Integer array (m, 2) of dense endpoint indices
        conductances: W per undirected edge, shape (m,)
        multiplicity: Number of lattice edges merged into each edge (1 for general graphs)
        root: Dense index of the root i₀
        boundary: Dense index of δ_N, or None
        box_radius: N for lattice boxes, or None
    """

    def __init__(
        self,
        labels: Sequence[Label],
        edges: np.ndarray,
        conductances: np.ndarray,
        root: int,
        multiplicity: np.ndarray | None = None,
        boundary: int | None = None,
        box_radius: int | None = None,
    ):
        self.labels: tuple[Label, ...] = tuple(labels)
        self._index = {label: i for i, label in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise StructuralError("vertex labels must be unique")

        self.edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.conductances = np.asarray(conductances, dtype=np.float64)
        if multiplicity is None:
            multiplicity = np.ones(len(self.conductances), dtype=np.int64)
        self.multiplicity = np.asarray(multiplicity, dtype=np.int64)
        self.root = int(root)
        self.boundary = boundary
        self.box_radius = box_radius

        self._validate()

        m = len(self.conductances)
        self.tails = np.empty(2 * m, dtype=np.int64)
        self.heads = np.empty(2 * m, dtype=np.int64)
        self.tails[0::2], self.heads[0::2] = self.edges[:, 0], self.edges[:, 1]
        self.tails[1::2], self.heads[1::2] = self.edges[:, 1], self.edges[:, 0]
        self.directed_conductances = np.repeat(self.conductances, 2)

        n = self.n_vertices
        self.weight_matrix = sp.csr_matrix((self.directed_conductances, (self.tails, self.heads)), shape=(n, n))
        self.weight_matrix.sort_indices()

        for array in (
            self.edges,
            self.conductances,
            self.multiplicity,
            self.tails,
            self.heads,
            self.directed_conductances,
        ):
            array.flags.writeable = False

    def _validate(self):
        n = len(self.labels)
        if n < 2:
            raise StructuralError("graph needs at least two vertices")
        if not 0 <= self.root < n:
            raise StructuralError(f"root index {self.root} out of range")
        if len(self.edges) != len(self.conductances) or len(self.edges) != len(self.multiplicity):
            raise StructuralError("edges, conductances and multiplicity must have the same length")
        if np.any(self.edges[:, 0] >= self.edges[:, 1]):
            raise StructuralError("edges must be stored as (i, j) with i < j and no loops")
        if len({(int(i), int(j)) for i, j in self.edges}) != len(self.edges):
            raise StructuralError("parallel edges must be merged before construction")
        if not np.all(np.isfinite(self.conductances)) or np.any(self.conductances <= 0):
            raise StructuralError("conductances must be finite and positive")
        adjacency = sp.csr_matrix((np.ones(len(self.edges)), (self.edges[:, 0], self.edges[:, 1])), shape=(n, n))
        n_components, _ = connected_components(adjacency, directed=False)
        if n_components != 1:
            raise StructuralError(f"graph is not connected ({n_components} components)")

    # Construction

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[Label, Label]],
        weights: Iterable[float],
        root: Label,
        labels: Sequence[Label] | None = None,
        multiplicity: Iterable[int] | None = None,
        boundary: Label | None = None,
        box_radius: int | None = None,
    ) -> "Graph":
        """Build a graph from labelled edges.

        Parallel edges are merged by summing conductances (and multiplicities),
        loops are dropped.

        Args:
            edges: Pairs of vertex labels
            weights: Conductance per pair
            root: Label of the root vertex
            labels: Vertex order; defaults to first-appearance order
            multiplicity: Lattice-edge count per pair (default 1 each)
            boundary: Label of the boundary vertex, if any
            box_radius: Box radius N for lattice boxes

        Returns:
            Graph instance
        """
        edges = list(edges)
        weights = [float(w) for w in weights]
        multiplicity = [1] * len(edges) if multiplicity is None else [int(c) for c in multiplicity]
        if len(weights) != len(edges) or len(multiplicity) != len(edges):
            raise StructuralError("one weight and one multiplicity per edge required")

        if labels is None:
            seen: dict[Label, None] = {}
            for a, b in edges:
                seen.setdefault(a, None)
                seen.setdefault(b, None)
            seen.setdefault(root, None)
            labels = list(seen)
        index = {label: i for i, label in enumerate(labels)}

        merged: dict[tuple[int, int], list[float]] = {}
        for (a, b), w, c in zip(edges, weights, multiplicity, strict=True):
            if a not in index or b not in index:
                raise UnknownVertexError(a if a not in index else b)
            if w <= 0 or not np.isfinite(w):
                raise StructuralError(f"conductance of edge ({a}, {b}) must be positive, got {w}")
            i, j = index[a], index[b]
            if i == j:
                continue
            key = (min(i, j), max(i, j))
            entry = merged.setdefault(key, [0.0, 0])
            entry[0] += w
            entry[1] += c

        keys = sorted(merged)
        if root not in index:
            raise UnknownVertexError(root)
        return cls(
            labels=labels,
            edges=np.array(keys, dtype=np.int64).reshape(-1, 2),
            conductances=np.array([merged[k][0] for k in keys]),
            multiplicity=np.array([merged[k][1] for k in keys], dtype=np.int64),
            root=index[root],
            boundary=None if boundary is None else index[boundary],
            box_radius=box_radius,
        )

    def with_conductances(self, conductances: ArrayLike) -> "Graph":
        """Same vertices and edges, new conductances (used for tilted weights)."""
        return Graph(
            labels=self.labels,
            edges=self.edges,
            conductances=np.asarray(conductances, dtype=np.float64),
            root=self.root,
            multiplicity=self.multiplicity,
            boundary=self.boundary,
            box_radius=self.box_radius,
        )

    def with_root(self, root: Label) -> "Graph":
        """Same graph rooted at another vertex."""
        return Graph(
            labels=self.labels,
            edges=self.edges,
            conductances=self.conductances,
            root=self.index(root),
            multiplicity=self.multiplicity,
            boundary=self.boundary,
            box_radius=self.box_radius,
        )

    # Lookup

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self.conductances)

    @property
    def root_label(self) -> Label:
        return self.labels[self.root]

    @property
    def free_vertices(self) -> np.ndarray:
        """Dense indices of all non-root vertices, in order."""
        return np.array([i for i in range(self.n_vertices) if i != self.root], dtype=np.int64)

    @property
    def max_unit_conductance(self) -> float:
        """Largest conductance per merged lattice edge; the quantity a bound W̄ must dominate."""
        return float((self.conductances / self.multiplicity).max())

    def index(self, label: Label) -> int:
        """Dense index of a vertex label."""
        if isinstance(label, list):
            label = tuple(label)
        try:
            return self._index[label]
        except (KeyError, TypeError):
            raise UnknownVertexError(label) from None

    def neighbors(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Dense neighbour indices of vertex i and the matching conductances."""
        start, stop = self.weight_matrix.indptr[i], self.weight_matrix.indptr[i + 1]
        return self.weight_matrix.indices[start:stop], self.weight_matrix.data[start:stop]

    def conductance(self, a: Label, b: Label) -> float:
        """W_{a,b}, or 0.0 when a and b are not adjacent."""
        return float(self.weight_matrix[self.index(a), self.index(b)])

    def edge_multiplicity(self, a: Label, b: Label) -> int:
        i, j = sorted((self.index(a), self.index(b)))
        hits = np.flatnonzero((self.edges[:, 0] == i) & (self.edges[:, 1] == j))
        return int(self.multiplicity[hits[0]]) if len(hits) else 0

    # Linear algebra helpers

    def laplacian(self, edge_weights: ArrayLike | None = None) -> sp.csr_matrix:
        """Symmetric graph Laplacian for per-edge weights (default: lattice-edge multiplicities)."""
        w = self.multiplicity.astype(np.float64) if edge_weights is None else np.asarray(edge_weights, dtype=np.float64)
        n = self.n_vertices
        dw = np.repeat(w, 2)
        adjacency = sp.csr_matrix((dw, (self.tails, self.heads)), shape=(n, n))
        degrees = np.asarray(adjacency.sum(axis=1)).ravel()
        return (sp.diags(degrees) - adjacency).tocsr()

    def to_networkx(self) -> nx.Graph:
        """Dense-index networkx view with `weight` and `multiplicity` edge attributes."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_vertices))
        for (i, j), w, c in zip(self.edges, self.conductances, self.multiplicity, strict=True):
            graph.add_edge(int(i), int(j), weight=float(w), multiplicity=int(c))
        return graph

    def digest(self) -> str:
        """SHA-256 over labels, edges, conductances and root (stable across runs)."""
        h = hashlib.sha256()
        h.update(repr(self.labels).encode())
        h.update(np.ascontiguousarray(self.edges).tobytes())
        h.update(np.ascontiguousarray(self.conductances).tobytes())
        h.update(np.ascontiguousarray(self.multiplicity).tobytes())
        h.update(str(self.root).encode())
        return h.hexdigest()

    def describe(self) -> dict[str, Any]:
        return {
            "n_vertices": self.n_vertices,
            "n_edges": self.n_edges,
            "root": _label_to_json(self.root_label),
            "box_radius": self.box_radius,
            "digest": self.digest(),
        }

    def __repr__(self) -> str:
        box = f", N={self.box_radius}" if self.box_radius is not None else ""
        return f"Graph(|V|={self.n_vertices}, |E|={self.n_edges}, root={self.root_label!r}{box})"


def _label_to_json(label: Label) -> Any:
    return list(label) if isinstance(label, tuple) else label


def build_z2_box(n: int, wh: float = 1.0, wv: float = 1.0) -> Graph:
    """Box [-N, N]² of Z² with every outside vertex contracted to δ_N.

    Vertices are ordered by a row-major scan (y outer, x inner) with δ_N
    last; the root is the origin. Each Z² edge leaving the box becomes an
    edge to δ_N, and edges landing on the same pair are merged with summed
    conductance.

    Args:
        n: Box radius N (>= 1)
        wh: Conductance of horizontal lattice edges
        wv: Conductance of vertical lattice edges

    Returns:
        Wired-boundary graph G_N
    """
    if int(n) != n or n <= 0:
        raise ValueError(f"box radius must be a positive integer, got {n}")
    if wh <= 0 or wv <= 0:
        raise ValueError(f"lattice conductances must be positive, got wh={wh}, wv={wv}")
    n = int(n)

    def inside(x: int, y: int) -> bool:
        return -n <= x <= n and -n <= y <= n

    sites = [(x, y) for y in range(-n, n + 1) for x in range(-n, n + 1)]
    edges: list[tuple[Label, Label]] = []
    weights: list[float] = []
    for x, y in sites:
        for dx, dy, w in ((1, 0, wh), (-1, 0, wh), (0, 1, wv), (0, -1, wv)):
            nx_, ny_ = x + dx, y + dy
            if inside(nx_, ny_):
                # each interior edge once, from its lower endpoint
                if (dx, dy) in ((1, 0), (0, 1)):
                    edges.append(((x, y), (nx_, ny_)))
                    weights.append(w)
            else:
                edges.append(((x, y), BOUNDARY))
                weights.append(w)

    return Graph.from_edges(
        edges,
        weights,
        root=(0, 0),
        labels=[*sites, BOUNDARY],
        boundary=BOUNDARY,
        box_radius=n,
    )


def gradient(graph: Graph, u: ArrayLike, edge: tuple[Label, Label]) -> float:
    """∇u_{i,j} = u_j - u_i on the directed edge (i, j).

    Args:
        graph: Graph the vertex function lives on
        u: Vertex function in dense-index order
        edge: Directed pair of vertex labels

    Returns:
        u_j - u_i

    Raises:
        ValueError: If u is not a single vertex function of this graph
    """
    values = _vertex_function(graph, u)
    if values.ndim != 1:
        raise ValueError("gradient takes a single vertex function")
    i, j = graph.index(edge[0]), graph.index(edge[1])
    return float(values[j] - values[i])


def gradients(graph: Graph, f: ArrayLike) -> np.ndarray:
    """∇f on every directed edge, in the graph's directed-edge order."""
    values = _vertex_function(graph, f)
    return values[..., graph.heads] - values[..., graph.tails]


def edge_gradients(graph: Graph, f: ArrayLike) -> np.ndarray:
    """∇f on each undirected edge oriented (i, j) with i < j."""
    values = _vertex_function(graph, f)
    return values[..., graph.edges[:, 1]] - values[..., graph.edges[:, 0]]


def directed_sum(graph: Graph, g: Callable[[np.ndarray], np.ndarray], f: ArrayLike) -> float:
    """Σ_{i→j} g(∇f_{i,j})."""
    return float(np.sum(g(gradients(graph, f))))


def dirichlet_energy(graph: Graph, f: ArrayLike) -> float:
    """E(f, f) = ½ Σ_{i→j} |∇f_{i,j}|² with conductance 1 per lattice edge.

    On graphs built from edge lists every edge has multiplicity 1, so this is
    the plain unit-conductance form; merged boundary edges of a wired box
    count once per Z² edge they replace.
    """
    grad = edge_gradients(graph, f)
    return float(np.sum(graph.multiplicity * grad**2))


def _vertex_function(graph: Graph, f: ArrayLike) -> np.ndarray:
    values = np.asarray(f, dtype=np.float64)
    if values.shape[-1] != graph.n_vertices:
        raise ValueError(f"vertex function has {values.shape[-1]} entries, graph has {graph.n_vertices} vertices")
    return values
