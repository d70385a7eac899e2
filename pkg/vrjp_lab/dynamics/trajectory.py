"""
Trajectories of jump processes and their local-time bookkeeping
"""

from dataclasses import dataclass

import numpy as np

from vrjp_lab.graph.core import Graph, Label


@dataclass(frozen=True)
class Trajectory:
    """Event list of a jump process started at `start` (dense indices).

    times[m] is the time of the (m+1)-th jump and destinations[m] its target.
    local_times[j] = 1 + time spent at j up to the last jump.
    """

    start: int
    times: np.ndarray
    destinations: np.ndarray
    local_times: np.ndarray

    @property
    def n_jumps(self) -> int:
        return len(self.times)

    def visited(self, graph: Graph) -> tuple[Label, ...]:
        """Destination labels in jump order."""
        return tuple(graph.labels[j] for j in self.destinations)

    def reconstructed_local_times(self) -> np.ndarray:
        """1 + sojourn per vertex, rebuilt from the event list alone."""
        occupied = np.concatenate([[self.start], self.destinations[:-1]])
        sojourns = np.diff(np.concatenate([[0.0], self.times]))
        local = np.ones(len(self.local_times))
        np.add.at(local, occupied, sojourns)
        return local

    def problems(self, graph: Graph, tolerance: float = 1e-12) -> list[str]:
        """Invariant violations; empty when the trajectory is consistent."""
        found = []
        if np.any(np.diff(self.times) <= 0) or (self.n_jumps and self.times[0] <= 0):
            found.append("jump times are not strictly increasing")
        previous = self.start
        for j in self.destinations:
            if graph.weight_matrix[previous, j] == 0:
                found.append(f"jump {graph.labels[previous]!r} -> {graph.labels[j]!r} is not along an edge")
            previous = j
        if np.any(self.local_times < 1):
            found.append("a local time is below 1")
        error = float(np.max(np.abs(self.reconstructed_local_times() - self.local_times)))
        if error > tolerance:
            found.append(f"local times differ from the event list by {error:.2e}")
        return found

    def to_rows(self, graph: Graph) -> list[dict]:
        """`time,vertex` rows, starting with the initial vertex at time 0."""
        rows = [{"time": 0.0, "vertex": _label_str(graph.labels[self.start])}]
        rows.extend(
            {"time": float(t), "vertex": _label_str(graph.labels[j])}
            for t, j in zip(self.times, self.destinations, strict=True)
        )
        return rows


def _label_str(label: Label) -> str:
    return ",".join(map(str, label)) if isinstance(label, tuple) else str(label)
