"""
Field samples: vertex functions pinned at the root
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from vrjp_lab.framework.errors import PinningError
from vrjp_lab.graph.core import Graph


@dataclass(frozen=True)
class FieldSample:
    """A mixing-field configuration u in dense-index order with u[root] == 0."""

    values: np.ndarray
    root: int

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError(f"field sample must be one-dimensional, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field sample has non-finite entries")
        if values[self.root] != 0.0:
            raise PinningError(f"u[root] must be 0, got {values[self.root]!r}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, graph: Graph) -> "FieldSample":
        return cls(np.zeros(graph.n_vertices), graph.root)

    @classmethod
    def from_free(cls, graph: Graph, free_values: ArrayLike) -> "FieldSample":
        """Insert the pinned zero at the root."""
        values = np.zeros(graph.n_vertices)
        values[graph.free_vertices] = np.asarray(free_values, dtype=np.float64)
        return cls(values, graph.root)

    @property
    def free_values(self) -> np.ndarray:
        return np.delete(self.values, self.root)

    def shifted(self, v: ArrayLike, gamma: float) -> "FieldSample":
        """u + γv; v must vanish at the root."""
        return FieldSample(self.values + gamma * pinned(np.asarray(v, dtype=np.float64), self.root, "v"), self.root)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self) -> int:
        return len(self.values)


def pinned(values: np.ndarray, root: int, name: str = "u") -> np.ndarray:
    """Return values unchanged after checking every row vanishes at the root."""
    if np.any(values[..., root] != 0.0):
        raise PinningError(f"{name}[root] must be 0")
    return values


def as_field(graph: Graph, u: "FieldSample | ArrayLike") -> np.ndarray:
    """Coerce a FieldSample or array (one or many rows) to a checked float array."""
    if isinstance(u, FieldSample):
        if u.root != graph.root:
            raise PinningError(f"sample pinned at index {u.root}, graph root is {graph.root}")
        return u.values
    values = np.asarray(u, dtype=np.float64)
    if values.shape[-1] != graph.n_vertices:
        raise ValueError(f"field has {values.shape[-1]} entries, graph has {graph.n_vertices} vertices")
    if not np.all(np.isfinite(values)):
        raise ValueError("field has non-finite entries")
    return pinned(values, graph.root)
