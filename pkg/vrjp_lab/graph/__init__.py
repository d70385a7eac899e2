"""Graph core: weighted graphs, the wired Z² box, gradients and the Dirichlet form."""

from .core import (
    BOUNDARY,
    Graph,
    Label,
    build_z2_box,
    directed_sum,
    dirichlet_energy,
    edge_gradients,
    gradient,
    gradients,
)
from .io import (
    cycle,
    make_graph,
    path,
    random_connected,
    read_edge_list,
    triangle,
    two_vertex,
    write_edge_list,
)

__all__ = [
    "BOUNDARY",
    "Graph",
    "Label",
    "build_z2_box",
    "gradient",
    "gradients",
    "edge_gradients",
    "directed_sum",
    "dirichlet_energy",
    "read_edge_list",
    "write_edge_list",
    "make_graph",
    "two_vertex",
    "triangle",
    "path",
    "cycle",
    "random_connected",
]
