"""
Graph IO and named desk-scale instances

Edge-list text format: one edge per line, `i j W_ij`, integer vertex ids,
`#` starts a comment. A comment line `# root <id>` names the root. Vertex
order is ascending id; without a root line or argument the root is the
smallest id.

`write_edge_list` stores dense indices and puts the vertex table (labels,
root, boundary, box radius, lattice multiplicities) in `<path>.labels.json`.
`read_edge_list` restores all of it when that file is present, so a written
graph reads back with the same digest.
"""

import json
import re
from pathlib import Path
from typing import Any

import fsspec
import networkx as nx
import numpy as np

from vrjp_lab.framework.errors import ConfigError

from .core import Graph, Label, build_z2_box

_ROOT_LINE = re.compile(r"^#\s*root\s+(-?\d+)\s*$")


def _label_from_json(value: Any) -> Label:
    return tuple(value) if isinstance(value, list) else value


def _read_vertex_table(path: str) -> dict[str, Any] | None:
    fs, fs_path = fsspec.core.url_to_fs(f"{path}.labels.json")
    if not fs.exists(fs_path):
        return None
    try:
        with fs.open(fs_path, "r") as f:
            table = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}.labels.json", f"invalid JSON: {e.msg}", line=e.lineno) from None
    missing = {"labels", "root", "multiplicity"} - set(table)
    if missing:
        raise ConfigError(f"{path}.labels.json", f"vertex table lacks {sorted(missing)}")
    return table


def read_edge_list(path: str | Path, root: int | None = None) -> Graph:
    """Read a general graph from an `i j W_ij` edge-list file.

    Args:
        path: Local or fsspec URL of the edge list
        root: Root vertex id; overrides the file's `# root` line and vertex table

    Returns:
        Graph with integer labels, or with the labels, root, boundary and
        multiplicities of the `<path>.labels.json` table when one exists

    Raises:
        ConfigError: On malformed lines (with the line number) or a vertex
            table that does not match the edges
    """
    edges: list[tuple[int, int]] = []
    weights: list[float] = []
    header_root: int | None = None
    with fsspec.open(str(path), "r") as f:
        for lineno, raw in enumerate(f, start=1):
            match = _ROOT_LINE.match(raw.strip())
            if match:
                header_root = int(match.group(1))
                continue
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ConfigError(str(path), f"expected 'i j W_ij', got {raw.strip()!r}", line=lineno)
            try:
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as e:
                raise ConfigError(str(path), str(e), line=lineno) from None
            if w <= 0:
                raise ConfigError(str(path), f"conductance must be positive, got {w}", line=lineno)
            edges.append((i, j))
            weights.append(w)
    if not edges:
        raise ConfigError(str(path), "edge list is empty")

    table = _read_vertex_table(str(path))
    if table is None:
        labels = sorted({v for e in edges for v in e})
        chosen = root if root is not None else header_root if header_root is not None else labels[0]
        return Graph.from_edges(edges, weights, root=chosen, labels=labels)

    labels = [_label_from_json(label) for label in table["labels"]]
    multiplicity = table["multiplicity"]
    if len(multiplicity) != len(edges):
        raise ConfigError(f"{path}.labels.json", f"{len(multiplicity)} multiplicities for {len(edges)} edges")
    if any(not 0 <= v < len(labels) for e in edges for v in e):
        raise ConfigError(str(path), f"vertex id outside the {len(labels)}-entry vertex table")
    root_index = root if root is not None else header_root if header_root is not None else table["root"]
    if not 0 <= root_index < len(labels):
        raise ConfigError(str(path), f"root id {root_index} outside the {len(labels)}-entry vertex table")
    boundary = table.get("boundary")
    return Graph.from_edges(
        [(labels[i], labels[j]) for i, j in edges],
        weights,
        root=labels[root_index],
        labels=labels,
        multiplicity=multiplicity,
        boundary=None if boundary is None else labels[boundary],
        box_radius=table.get("box_radius"),
    )


def write_edge_list(graph: Graph, path: str | Path):
    """Write `i j W_ij` with dense indices and a `# root` line, plus a `<path>.labels.json` vertex table."""
    with fsspec.open(str(path), "w") as f:
        f.write(f"# {graph.n_vertices} vertices, {graph.n_edges} edges\n")
        f.write(f"# root {graph.root}\n")
        for (i, j), w in zip(graph.edges, graph.conductances, strict=True):
            f.write(f"{int(i)} {int(j)} {float(w)!r}\n")
    table = {
        "root": graph.root,
        "boundary": graph.boundary,
        "box_radius": graph.box_radius,
        "labels": [list(label) if isinstance(label, tuple) else label for label in graph.labels],
        "multiplicity": graph.multiplicity.tolist(),
    }
    with fsspec.open(f"{path}.labels.json", "w") as f:
        f.write(json.dumps(table, sort_keys=True, indent=2))


def two_vertex(w: float = 1.0) -> Graph:
    """Single edge {0, 1}, rooted at 0."""
    return Graph.from_edges([(0, 1)], [w], root=0)


def triangle(w: float = 1.0) -> Graph:
    """K₃ with equal conductances, rooted at 0."""
    return Graph.from_edges([(0, 1), (1, 2), (0, 2)], [w, w, w], root=0)


def path(n: int = 3, w: float = 1.0) -> Graph:
    """Path 0–1–…–(n-1), rooted at 0."""
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], [w] * (n - 1), root=0)


def cycle(n: int = 4, w: float = 1.0) -> Graph:
    """Cycle on n vertices, rooted at 0."""
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)], [w] * n, root=0)


def random_connected(
    n_vertices: int,
    rng: np.random.Generator,
    edge_probability: float = 0.6,
    w_range: tuple[float, float] = (0.2, 5.0),
) -> Graph:
    """Random connected G(n, p) graph with log-uniform conductances, rooted at 0."""
    while True:
        seed = int(rng.integers(2**31 - 1))
        g = nx.gnp_random_graph(n_vertices, edge_probability, seed=seed)
        if nx.is_connected(g):
            break
    edges = sorted(g.edges())
    low, high = np.log(w_range[0]), np.log(w_range[1])
    weights = np.exp(rng.uniform(low, high, size=len(edges)))
    return Graph.from_edges(edges, weights, root=0, labels=list(range(n_vertices)))


NAMED_GRAPHS = {
    "two_vertex": two_vertex,
    "triangle": triangle,
    "path": path,
    "cycle": cycle,
}


def make_graph(kind: str, **params) -> Graph:
    """Build a graph from a config `kind` and its parameters.

    Kinds: `box` (n, wh, wv), `edge_list` (path, root), and the named
    instances in NAMED_GRAPHS.
    """
    if kind == "box":
        return build_z2_box(params.get("n", 3), params.get("wh", 1.0), params.get("wv", 1.0))
    if kind == "edge_list":
        if not params.get("path"):
            raise ConfigError("graph.path", "edge_list graphs need a path")
        return read_edge_list(params["path"], root=params.get("root"))
    if kind not in NAMED_GRAPHS:
        raise ConfigError("graph.kind", f"unknown graph kind {kind!r}; available: box, edge_list, {', '.join(NAMED_GRAPHS)}")
    if kind in ("path", "cycle"):
        return NAMED_GRAPHS[kind](params.get("size", 3 if kind == "path" else 4), params.get("w", 1.0))
    return NAMED_GRAPHS[kind](params.get("w", 1.0))
