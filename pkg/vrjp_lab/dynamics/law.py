"""
Jump-chain laws: VRJP by simulation, quenched mixture by exact averaging

Sequences are the k destinations visited after the start vertex. The visited
sequence does not change under a monotone time change, so the two laws can
be compared directly.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate
from scipy.special import logsumexp

from vrjp_lab.framework.seeding import stream
from vrjp_lab.graph.core import Graph, Label

from .simulate import _start_index, simulate_vrjp_batch
from .trajectory import _label_str

logger = logging.getLogger(__name__)

Sequence = tuple[Label, ...]


@dataclass(frozen=True)
class JumpChainLaw:
    """Law of the first k destinations; n_samples is None for exact laws."""

    start: Label
    horizon: int
    probabilities: dict[Sequence, float]
    stderr: dict[Sequence, float] = field(default_factory=dict)
    n_samples: int | None = None

    @property
    def exact(self) -> bool:
        return self.n_samples is None

    def total(self) -> float:
        return math.fsum(self.probabilities.values())

    def is_neighbour_consistent(self, graph: Graph) -> bool:
        for sequence in self.probabilities:
            previous = graph.index(self.start)
            for label in sequence:
                j = graph.index(label)
                if graph.weight_matrix[previous, j] == 0:
                    return False
                previous = j
        return True

    def to_json_dict(self) -> dict:
        """{"start", "horizon", "n_samples", "law": {"a>b>c": [prob, stderr]}} with sorted keys."""
        law = {
            ">".join(_label_str(label) for label in sequence): [p, self.stderr.get(sequence, 0.0)]
            for sequence, p in self.probabilities.items()
        }
        return {
            "start": _label_str(self.start),
            "horizon": self.horizon,
            "n_samples": self.n_samples,
            "law": dict(sorted(law.items())),
        }


def enumerate_sequences(graph: Graph, start: int, k: int) -> list[tuple[int, ...]]:
    """All neighbour-consistent destination sequences of length k from start."""
    sequences: list[tuple[int, ...]] = [()]
    for _ in range(k):
        extended = []
        for sequence in sequences:
            tail = sequence[-1] if sequence else start
            extended.extend((*sequence, int(j)) for j in graph.neighbors(tail)[0])
        sequences = extended
    return sequences


def count_vrjp_sequences(
    graph: Graph, start: Label | None, k: int, n_runs: int, seed: int, batch_index: int
) -> dict[tuple[int, ...], int]:
    """Counts of simulated destination sequences for one batch of runs."""
    destinations = simulate_vrjp_batch(graph, start, k, n_runs, stream(seed, "vrjp", batch_index))
    sequences, counts = np.unique(destinations, axis=0, return_counts=True)
    return {tuple(int(j) for j in row): int(c) for row, c in zip(sequences, counts, strict=True)}


def vrjp_jump_chain_law(
    graph: Graph,
    start: Label | None,
    k: int,
    n_runs: int,
    seed: int,
    batch_size: int = 100_000,
    executor=None,
) -> JumpChainLaw:
    """Estimate the VRJP jump-chain law from n_runs simulated runs.

    Runs are split into batches with their own random streams; counts are
    merged in batch order. Standard errors are binomial, √(p(1-p)/n).
    """
    jobs = []
    remaining, batch_index = n_runs, 0
    while remaining > 0:
        size = min(batch_size, remaining)
        jobs.append(
            {"graph": graph, "start": start, "k": k, "n_runs": size, "seed": seed, "batch_index": batch_index}
        )
        remaining -= size
        batch_index += 1

    if executor is None:
        results = [count_vrjp_sequences(**job) for job in jobs]
    else:
        results = executor.map(count_vrjp_sequences, jobs)

    counts: Counter = Counter()
    for batch in results:
        counts.update(batch)
    labels = graph.labels
    probabilities, stderr = {}, {}
    for sequence in sorted(counts):
        p = counts[sequence] / n_runs
        key = tuple(labels[j] for j in sequence)
        probabilities[key] = p
        stderr[key] = math.sqrt(p * (1.0 - p) / n_runs)
    start_index = _start_index(graph, start)
    logger.info("VRJP law: %d runs, %d distinct sequences", n_runs, len(probabilities))
    return JumpChainLaw(labels[start_index], k, probabilities, stderr, n_runs)


def _batch_stderr(values: np.ndarray, n_batches: int) -> float:
    """Batch-means standard error of the mean over rows (chains) x columns (samples)."""
    per_chain = values.shape[1]
    batches = max(1, min(n_batches, per_chain))
    usable = (per_chain // batches) * batches
    means = values[:, :usable].reshape(values.shape[0], batches, -1).mean(axis=-1).ravel()
    if len(means) < 2:
        return math.nan
    return float(means.std(ddof=1) / math.sqrt(len(means)))


def quenched_mixture_law(
    graph: Graph,
    start: Label | None,
    k: int,
    field_samples: ArrayLike,
    n_batches: int = 20,
) -> JumpChainLaw:
    """Average of the exact quenched jump-chain law over field samples.

    Args:
        graph: Connected graph
        start: Start vertex (default root)
        k: Horizon
        field_samples: Array (chains, samples, vertices) or (samples, vertices)
        n_batches: Batches per chain for the standard errors

    Returns:
        JumpChainLaw with n_samples = number of field samples
    """
    values = np.asarray(field_samples, dtype=np.float64)
    if values.ndim == 2:
        values = values[None, :, :]
    n_chains, per_chain, n = values.shape
    flat = values.reshape(-1, n)

    with np.errstate(divide="ignore"):
        log_w = np.log(graph.weight_matrix.toarray())
    scores = log_w[None, :, :] + flat[:, None, :]
    log_p = scores - logsumexp(scores, axis=-1, keepdims=True)

    start_index = _start_index(graph, start)
    probabilities, stderr = {}, {}
    for sequence in enumerate_sequences(graph, start_index, k):
        path = (start_index, *sequence)
        log_prob = sum(log_p[:, a, b] for a, b in zip(path[:-1], path[1:], strict=True))
        per_sample = np.exp(log_prob).reshape(n_chains, per_chain)
        key = tuple(graph.labels[j] for j in sequence)
        probabilities[key] = float(per_sample.mean())
        stderr[key] = _batch_stderr(per_sample, n_batches)
    return JumpChainLaw(graph.labels[start_index], k, probabilities, stderr, len(flat))


def total_variation(law_a: JumpChainLaw, law_b: JumpChainLaw) -> tuple[float, float]:
    """(½ Σ|p - q|, ½ Σ √(se_p² + se_q²)) over the union of supports.

    The second value is the scale of the first under sampling noise, not its
    standard error: TV sums absolute errors, so its noise grows with Σ se
    rather than √Σ se². With independent normal cell errors the expected TV
    between two estimates of one law is √(2/π) times this scale, and callers
    accept TV up to three times it.
    """
    keys = set(law_a.probabilities) | set(law_b.probabilities)
    tv = 0.0
    combined = 0.0
    for key in keys:
        tv += abs(law_a.probabilities.get(key, 0.0) - law_b.probabilities.get(key, 0.0))
        se_a = law_a.stderr.get(key, 0.0)
        se_b = law_b.stderr.get(key, 0.0)
        combined += math.sqrt(se_a**2 + se_b**2)
    return 0.5 * tv, 0.5 * combined


def second_jump_oracle(graph: Graph, start: Label | None = None) -> dict[tuple[Label, Label], float]:
    """Exact law of the first two VRJP destinations, integrating over the first holding time.

    The first jump leaves start at rate λ = Σ_j W_{start,j} to j ∝ W; after a
    holding time t the local time at start is 1 + t and every other local
    time is 1.
    """
    i0 = _start_index(graph, start)
    first, first_w = graph.neighbors(i0)
    rate = float(first_w.sum())
    law = {}
    for j, w_j in zip(first, first_w, strict=True):
        second, second_w = graph.neighbors(j)
        for ell, w_l in zip(second, second_w, strict=True):

            def integrand(t: float, ell=ell, w_l=w_l, second=second, second_w=second_w) -> float:
                local = np.where(second == i0, 1.0 + t, 1.0)
                return rate * math.exp(-rate * t) * w_l * (1.0 + t if ell == i0 else 1.0) / float(second_w @ local)

            value, _ = integrate.quad(integrand, 0.0, math.inf, epsabs=1e-13, epsrel=1e-12)
            law[(graph.labels[j], graph.labels[ell])] = float(w_j / rate) * value
    return law
