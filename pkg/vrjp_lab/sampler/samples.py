"""
Sample sets: merged output of several chains
"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from vrjp_lab.framework.config import SamplerConfig
from vrjp_lab.graph.core import Graph, Label

from .metropolis import ChainResult, run_chain


@dataclass
class SampleSet:
    """Retained samples of shape (chains, samples per chain, vertices), merged by chain index."""

    graph: Graph
    values: np.ndarray
    acceptance_rates: np.ndarray
    step_sizes: np.ndarray
    max_drifts: np.ndarray
    config: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_chains(cls, graph: Graph, results: list[ChainResult], config: SamplerConfig | None = None) -> "SampleSet":
        results = sorted(results, key=lambda r: r.chain_id)
        return cls(
            graph=graph,
            values=np.stack([r.samples for r in results]),
            acceptance_rates=np.array([r.acceptance_rate for r in results]),
            step_sizes=np.array([r.step_size for r in results]),
            max_drifts=np.array([r.max_drift for r in results]),
            config={} if config is None else dict(vars(config)),
        )

    @property
    def n_chains(self) -> int:
        return self.values.shape[0]

    @property
    def samples_per_chain(self) -> int:
        return self.values.shape[1]

    @property
    def n_samples(self) -> int:
        return self.n_chains * self.samples_per_chain

    @property
    def flat(self) -> np.ndarray:
        """All samples (chains concatenated), shape (n_samples, vertices)."""
        return self.values.reshape(-1, self.values.shape[-1])

    def coordinate(self, vertex: Label) -> np.ndarray:
        """u_vertex per chain and sample, shape (chains, samples per chain)."""
        return self.values[:, :, self.graph.index(vertex)]

    def diagnostics(self) -> dict[str, Any]:
        return {
            "n_chains": self.n_chains,
            "samples_per_chain": self.samples_per_chain,
            "acceptance_rates": self.acceptance_rates.tolist(),
            "step_sizes": self.step_sizes.tolist(),
            "max_drift": float(self.max_drifts.max()) if len(self.max_drifts) else 0.0,
        }


def sample_field(graph: Graph, cfg: SamplerConfig, executor=None, dump_dir: str | None = None) -> SampleSet:
    """Run cfg.n_chains chains (through the executor when given) and merge them."""
    jobs = [{"graph": graph, "cfg": cfg, "chain_id": c, "dump_dir": dump_dir} for c in range(cfg.n_chains)]
    if executor is None:
        results = [run_chain(**job) for job in jobs]
    else:
        results = executor.map(run_chain, jobs)
    return SampleSet.from_chains(graph, results, cfg)
