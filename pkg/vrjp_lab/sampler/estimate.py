"""
Moment Estimation: batch-means estimates of E[e^{s u_y}] and KS distances
"""

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
from scipy import stats

from vrjp_lab.graph.core import Label

from .samples import SampleSet


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo estimate of E[e^{s u_y}].

    stderr is NaN (and `stderr_available` False) when fewer than two chains
    contributed. chain_max holds the largest e^{s u_y} seen per chain, a
    heavy-tail warning sign.
    """

    y: Label
    s: float
    estimate: float
    stderr: float
    ess: float
    chain_means: tuple[float, ...]
    chain_max: tuple[float, ...]
    n_samples: int
    n_chains: int

    @property
    def stderr_available(self) -> bool:
        return math.isfinite(self.stderr)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["y"] = list(self.y) if isinstance(self.y, tuple) else self.y
        data["stderr_available"] = self.stderr_available
        return data


def estimate_exp_moment(samples: SampleSet, y: Label, s: float, n_batches: int = 20) -> MomentEstimate:
    """Empirical mean of e^{s u_y} with a batch-means standard error.

    Each chain is cut into n_batches contiguous batches; the standard error
    is the spread of all batch means across chains.

    Args:
        samples: Merged chain output
        y: Target vertex (the root gives exactly 1)
        s: Exponent in (0, 1]
        n_batches: Batches per chain

    Returns:
        MomentEstimate
    """
    if not 0 < s <= 1:
        raise ValueError(f"exponent s must lie in (0, 1], got {s}")
    n_chains, per_chain = samples.n_chains, samples.samples_per_chain
    if samples.graph.index(y) == samples.graph.root:
        ones = tuple([1.0] * n_chains)
        return MomentEstimate(y, s, 1.0, 0.0, float(samples.n_samples), ones, ones, samples.n_samples, n_chains)

    values = np.exp(s * samples.coordinate(y))
    estimate = float(values.mean())

    stderr = math.nan
    if n_chains >= 2:
        batches = min(n_batches, per_chain)
        usable = (per_chain // batches) * batches
        batch_means = values[:, :usable].reshape(n_chains, batches, -1).mean(axis=-1).ravel()
        stderr = float(batch_means.std(ddof=1) / math.sqrt(len(batch_means)))

    variance = float(values.var())
    if stderr > 0:
        ess = min(variance / stderr**2, float(samples.n_samples))
    else:
        ess = float(samples.n_samples) if n_chains >= 2 else math.nan

    return MomentEstimate(
        y=y,
        s=s,
        estimate=estimate,
        stderr=stderr,
        ess=ess,
        chain_means=tuple(float(m) for m in values.mean(axis=1)),
        chain_max=tuple(float(m) for m in values.max(axis=1)),
        n_samples=samples.n_samples,
        n_chains=n_chains,
    )


def ks_distance(samples: np.ndarray, grid: np.ndarray, cdf: np.ndarray) -> float:
    """Kolmogorov-Smirnov statistic of 1-D samples against a tabulated CDF."""
    result = stats.kstest(np.asarray(samples, dtype=np.float64).ravel(), lambda x: np.interp(x, grid, cdf))
    return float(result.statistic)
