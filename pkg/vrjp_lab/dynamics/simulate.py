"""
VRJP and quenched jump-process simulation

While the VRJP sits at i, every other local time is frozen, so the holding
time is exponential with rate Σ_j W_ij L_j and the target is chosen with
probability ∝ W_ij L_j. Holding times come from inverse-transform sampling.
"""

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import logsumexp

from vrjp_lab.field.sample import FieldSample, as_field
from vrjp_lab.framework.seeding import stream
from vrjp_lab.graph.core import Graph, Label

from .trajectory import Trajectory


def _generator(seed: int | np.random.Generator, *key) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return stream(seed, *key)


def _exponential(rng: np.random.Generator, rate: float) -> float:
    return -math.log1p(-rng.random()) / rate


def _start_index(graph: Graph, start: Label | None) -> int:
    return graph.root if start is None else graph.index(start)


def simulate_vrjp(
    graph: Graph,
    start: Label | None,
    k: int,
    seed: int | np.random.Generator,
) -> Trajectory:
    """Simulate exactly k jumps of the VRJP with all local times starting at 1.

    Args:
        graph: Connected graph
        start: Initial vertex label (default: root)
        k: Number of jumps (>= 1)
        seed: Seed or Generator

    Returns:
        Trajectory with final local times
    """
    if k < 1:
        raise ValueError(f"need at least one jump, got k={k}")
    rng = _generator(seed, "vrjp")
    current = _start_index(graph, start)
    start_index = current
    local = np.ones(graph.n_vertices)
    now = 0.0
    times, destinations = [], []
    for _ in range(k):
        neighbours, weights = graph.neighbors(current)
        rates = weights * local[neighbours]
        total = float(rates.sum())
        hold = _exponential(rng, total)
        local[current] += hold
        now += hold
        choice = int(np.searchsorted(np.cumsum(rates), rng.random() * total, side="right"))
        current = int(neighbours[min(choice, len(neighbours) - 1)])
        times.append(now)
        destinations.append(current)
    return Trajectory(start_index, np.array(times), np.array(destinations, dtype=np.int64), local)


def quenched_transition_matrix(graph: Graph, u: FieldSample | ArrayLike) -> np.ndarray:
    """Jump-chain matrix P_ij = W_ij e^{u_j} / Σ_ℓ W_iℓ e^{u_ℓ}, for one field (n,) or a stack (S, n)."""
    values = as_field(graph, u)
    with np.errstate(divide="ignore"):
        log_w = np.log(graph.weight_matrix.toarray())
    scores = log_w + values[..., None, :]
    return np.exp(scores - logsumexp(scores, axis=-1, keepdims=True))


def simulate_quenched(
    graph: Graph,
    u: FieldSample | ArrayLike,
    start: Label | None,
    k: int,
    seed: int | np.random.Generator,
) -> Trajectory:
    """Markov jump process with rates ½ W_ij e^{u_j - u_i} in the fixed environment u."""
    if k < 1:
        raise ValueError(f"need at least one jump, got k={k}")
    values = as_field(graph, u)
    rng = _generator(seed, "quenched")
    current = _start_index(graph, start)
    start_index = current
    local = np.ones(graph.n_vertices)
    now = 0.0
    times, destinations = [], []
    for _ in range(k):
        neighbours, weights = graph.neighbors(current)
        rates = 0.5 * weights * np.exp(values[neighbours] - values[current])
        total = float(rates.sum())
        hold = _exponential(rng, total)
        local[current] += hold
        now += hold
        choice = int(np.searchsorted(np.cumsum(rates), rng.random() * total, side="right"))
        current = int(neighbours[min(choice, len(neighbours) - 1)])
        times.append(now)
        destinations.append(current)
    return Trajectory(start_index, np.array(times), np.array(destinations, dtype=np.int64), local)


def simulate_vrjp_batch(
    graph: Graph,
    start: Label | None,
    k: int,
    n_runs: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Jump chains of n_runs independent VRJPs, simulated side by side.

    Returns:
        Integer array (n_runs, k) of destinations (dense indices)
    """
    if k < 1:
        raise ValueError(f"need at least one jump, got k={k}")
    weights = graph.weight_matrix.toarray()
    rows = np.arange(n_runs)
    current = np.full(n_runs, _start_index(graph, start), dtype=np.int64)
    local = np.ones((n_runs, graph.n_vertices))
    destinations = np.empty((n_runs, k), dtype=np.int64)
    for step in range(k):
        rates = weights[current] * local
        total = rates.sum(axis=1)
        local[rows, current] += -np.log1p(-rng.random(n_runs)) / total
        cumulative = np.cumsum(rates, axis=1)
        # strictly below the last cumulative rate, so some column always exceeds it
        target = np.minimum(rng.random(n_runs) * cumulative[:, -1], np.nextafter(cumulative[:, -1], 0.0))
        current = np.argmax(cumulative > target[:, None], axis=1)
        destinations[:, step] = current
    return destinations
