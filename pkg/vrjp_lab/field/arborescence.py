"""
Arborescence enumeration: brute-force oracle for the tree polynomial

Spanning trees are enumerated from (n-1)-edge subsets and oriented toward
the root. Only meant for small graphs.
"""

import itertools
import math
from dataclasses import dataclass

import networkx as nx
import numpy as np
from numpy.typing import ArrayLike
from scipy.special import logsumexp

from vrjp_lab.graph.core import Graph

from .sample import FieldSample, as_field, pinned

MAX_SUBSETS = 200_000


@dataclass(frozen=True)
class Arborescence:
    """Spanning tree oriented toward the root: one (child, parent) arc per non-root vertex."""

    arcs: tuple[tuple[int, int], ...]
    log_weight: float

    def statistic(self, v: np.ndarray) -> float:
        """Σ_{(i,j)∈T} ∇v_ij."""
        return float(sum(v[j] - v[i] for i, j in self.arcs))

    def is_valid(self, graph: Graph) -> bool:
        parent = dict(self.arcs)
        if len(parent) != len(self.arcs) or set(parent) != set(graph.free_vertices.tolist()):
            return False
        for start in parent:
            seen, node = set(), start
            while node != graph.root:
                if node in seen or node not in parent:
                    return False
                seen.add(node)
                node = parent[node]
        return True


def enumerate_arborescences(graph: Graph, u: FieldSample | ArrayLike) -> list[Arborescence]:
    """All arborescences toward the root with their log weights Σ ln(W_ij e^{∇u_ij})."""
    values = as_field(graph, u)
    n = graph.n_vertices
    if math.comb(graph.n_edges, n - 1) > MAX_SUBSETS:
        raise ValueError(f"too many edge subsets to enumerate ({graph.n_edges} edges, {n} vertices)")

    trees = []
    for subset in itertools.combinations(range(graph.n_edges), n - 1):
        tree = nx.Graph()
        tree.add_nodes_from(range(n))
        tree.add_edges_from(graph.edges[list(subset)].tolist())
        if not nx.is_tree(tree):
            continue
        parent = dict(nx.bfs_predecessors(tree, graph.root))
        arcs = tuple(sorted((child, p) for child, p in parent.items()))
        log_weight = sum(
            math.log(graph.weight_matrix[i, j]) + values[j] - values[i]
            for i, j in arcs
        )
        trees.append(Arborescence(arcs=arcs, log_weight=float(log_weight)))
    return trees


def tree_polynomial_enumerated(graph: Graph, u: FieldSample | ArrayLike) -> float:
    """ln D by explicit summation over arborescences."""
    return float(logsumexp([tree.log_weight for tree in enumerate_arborescences(graph, u)]))


@dataclass(frozen=True)
class ArborescenceLaw:
    """Law M(W, u) on arborescences and the moments of Σ_T ∇v under it."""

    trees: tuple[Arborescence, ...]
    probabilities: np.ndarray
    statistics: np.ndarray

    @property
    def mean(self) -> float:
        return float(self.probabilities @ self.statistics)

    @property
    def variance(self) -> float:
        centred = self.statistics - self.mean
        return float(self.probabilities @ centred**2)


def arborescence_law(graph: Graph, u: FieldSample | ArrayLike, v: ArrayLike) -> ArborescenceLaw:
    """Enumerated law M(W, u) with P(T) ∝ Π_{(i,j)∈T} W_ij e^{∇u_ij}."""
    values = pinned(np.asarray(v, dtype=np.float64), graph.root, "v")
    trees = enumerate_arborescences(graph, u)
    log_weights = np.array([tree.log_weight for tree in trees])
    probabilities = np.exp(log_weights - logsumexp(log_weights))
    statistics = np.array([tree.statistic(values) for tree in trees])
    return ArborescenceLaw(trees=tuple(trees), probabilities=probabilities, statistics=statistics)
