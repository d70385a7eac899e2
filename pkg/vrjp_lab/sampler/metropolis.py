"""
Field Sampler: single-site Metropolis for the mixing-field measure

Each move changes one non-root coordinate u_k. In the symmetric tree matrix
H (det H = D) such a move only rescales the diagonal entries at k and at the
neighbours of k, so the determinant ratio is a small (deg + 1) determinant
built from the maintained inverse, and an accepted move updates the inverse
by the Woodbury identity. A full Cholesky refactorization every
`refresh_period` sweeps bounds the accumulated drift.
"""

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from vrjp_lab.field.density import log_density, symmetric_tree_matrix
from vrjp_lab.field.sample import FieldSample
from vrjp_lab.framework.config import SamplerConfig
from vrjp_lab.framework.errors import NonFiniteDensityError, SamplerDriftError, StructuralError
from vrjp_lab.framework.seeding import stream
from vrjp_lab.graph.core import Graph

logger = logging.getLogger(__name__)

# Robbins-Monro bounds for the adapted proposal scale
_MIN_STEP, _MAX_STEP = 1e-3, 50.0


@dataclass(frozen=True)
class _Proposal:
    vertex: int
    value: float
    touched: np.ndarray
    diag_change: np.ndarray
    positions: np.ndarray
    small: np.ndarray
    log_det_change: float


@dataclass(frozen=True)
class ChainResult:
    """Retained samples and diagnostics of one chain."""

    chain_id: int
    samples: np.ndarray
    acceptance_rate: float
    step_size: float
    max_drift: float
    n_refreshes: int


class FieldChain:
    """One Metropolis chain over the non-root coordinates, started at u ≡ 0."""

    def __init__(
        self,
        graph: Graph,
        rng: np.random.Generator,
        step_size: float = 1.0,
        chain_id: int = 0,
        refresh_period: int = 50,
        drift_tolerance: float = 1e-6,
        dump_dir: str | Path | None = None,
    ):
        self.graph = graph
        self.rng = rng
        self.step_size = float(step_size)
        self.chain_id = chain_id
        self.refresh_period = refresh_period
        self.drift_tolerance = drift_tolerance
        self.dump_dir = dump_dir

        self._free = graph.free_vertices
        self._position = np.full(graph.n_vertices, -1, dtype=np.int64)
        self._position[self._free] = np.arange(len(self._free))
        self._neighbours = [graph.neighbors(k) for k in range(graph.n_vertices)]

        self.sweeps = 0
        self.max_drift = 0.0
        self.n_refreshes = 0
        self.reset()

    def reset(self, u: np.ndarray | None = None):
        """Set the state (default u ≡ 0) and refactorize."""
        self.u = np.zeros(self.graph.n_vertices) if u is None else np.array(u, dtype=np.float64)
        FieldSample(self.u, self.graph.root)
        self.h_inv, self.log_tree = self._factorize()
        self._h_diag = np.zeros(self.graph.n_vertices)
        for k, (nbrs, w) in enumerate(self._neighbours):
            self._h_diag[k] = np.sum(w * np.exp(self.u[nbrs] - self.u[k]))

    def _factorize(self) -> tuple[np.ndarray, float]:
        matrix = symmetric_tree_matrix(self.graph, self.u)
        try:
            factor = cho_factor(matrix, lower=True)
        except np.linalg.LinAlgError:
            raise StructuralError("symmetric tree matrix lost positive definiteness") from None
        log_det = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
        return cho_solve(factor, np.eye(len(matrix))), log_det

    def log_acceptance_ratio(self, vertex: int, new_value: float) -> float:
        """log q(u') - log q(u) for u' = u with u'[vertex] = new_value."""
        return self._propose(vertex, new_value)[0]

    def _propose(self, k: int, new_value: float) -> tuple[float, _Proposal | None]:
        if k == self.graph.root:
            raise ValueError("the root coordinate is pinned")
        old = self.u[k]
        delta = new_value - old
        nbrs, w = self._neighbours[k]
        with np.errstate(over="ignore", invalid="ignore"):
            energy_change = -float(np.sum(w * (np.cosh(new_value - self.u[nbrs]) - np.cosh(old - self.u[nbrs]))))
            if energy_change == -math.inf:
                return -math.inf, None

            touched = np.concatenate([[k], nbrs])
            diag_change = np.concatenate(
                [[self._h_diag[k] * np.expm1(-delta)], w * np.exp(old - self.u[nbrs]) * np.expm1(delta)]
            )
        keep = touched != self.graph.root
        positions = self._position[touched[keep]]
        change = diag_change[keep]
        small = np.eye(len(positions)) + change[:, None] * self.h_inv[np.ix_(positions, positions)]
        sign, log_det_change = np.linalg.slogdet(small)
        if sign <= 0:
            return -math.inf, None

        log_ratio = energy_change + 0.5 * float(log_det_change)
        if not math.isfinite(log_ratio):
            if log_ratio == -math.inf:
                return log_ratio, None
            state = self.u.copy()
            state[k] = new_value
            error = NonFiniteDensityError(state, self.chain_id)
            if self.dump_dir is not None:
                error.persist(self.dump_dir)
            raise error
        return log_ratio, _Proposal(k, new_value, touched, diag_change, positions, small, float(log_det_change))

    def _accept(self, proposal: _Proposal):
        keep = proposal.touched != self.graph.root
        change = proposal.diag_change[keep]
        columns = self.h_inv[:, proposal.positions]
        rows = change[:, None] * self.h_inv[proposal.positions, :]
        self.h_inv -= columns @ np.linalg.solve(proposal.small, rows)
        self.log_tree += proposal.log_det_change
        self._h_diag[proposal.touched] += proposal.diag_change
        self.u[proposal.vertex] = proposal.value

    def sweep(self) -> float:
        """One proposal per non-root coordinate in index order; returns the acceptance fraction."""
        steps = self.step_size * self.rng.standard_normal(len(self._free))
        uniforms = self.rng.random(len(self._free))
        accepted = 0
        for k, step, uniform in zip(self._free, steps, uniforms, strict=True):
            log_ratio, proposal = self._propose(int(k), self.u[k] + step)
            if proposal is not None and math.log(uniform) < log_ratio:
                self._accept(proposal)
                accepted += 1
        self.sweeps += 1
        if self.sweeps % self.refresh_period == 0:
            self.refresh()
        return accepted / len(self._free)

    def refresh(self) -> float:
        """Refactorize from scratch; raise if the incremental ln D drifted too far."""
        h_inv, log_tree = self._factorize()
        drift = abs(log_tree - self.log_tree)
        self.max_drift = max(self.max_drift, drift)
        self.n_refreshes += 1
        if drift > self.drift_tolerance:
            raise SamplerDriftError(drift, self.drift_tolerance, self.sweeps)
        self.h_inv, self.log_tree = h_inv, log_tree
        for k, (nbrs, w) in enumerate(self._neighbours):
            self._h_diag[k] = np.sum(w * np.exp(self.u[nbrs] - self.u[k]))
        logger.debug("Chain %d refresh at sweep %d, drift %.2e", self.chain_id, self.sweeps, drift)
        return drift

    def log_density(self) -> float:
        return log_density(self.graph, self.u)

    def burn_in(self, n_sweeps: int, adapt: bool = True, target_acceptance: float = 0.3):
        """Discard n_sweeps; σ follows a Robbins-Monro recursion toward the target rate, then freezes."""
        log_step = math.log(self.step_size)
        for t in range(n_sweeps):
            rate = self.sweep()
            if adapt:
                log_step += (rate - target_acceptance) / math.sqrt(t + 1.0)
                log_step = min(max(log_step, math.log(_MIN_STEP)), math.log(_MAX_STEP))
                self.step_size = math.exp(log_step)

    def samples(self, n_samples: int, thinning: int = 1) -> Iterator[tuple[np.ndarray, float]]:
        """Yield (state copy, acceptance fraction since last yield) every `thinning` sweeps."""
        for _ in range(n_samples):
            rate = sum(self.sweep() for _ in range(thinning)) / thinning
            yield self.u.copy(), rate


def _chain(graph: Graph, cfg: SamplerConfig, chain_id: int, dump_dir: str | Path | None) -> FieldChain:
    return FieldChain(
        graph,
        rng=stream(0 if cfg.seed is None else cfg.seed, "chain", chain_id),
        step_size=cfg.step_size,
        chain_id=chain_id,
        refresh_period=cfg.refresh_period,
        drift_tolerance=cfg.drift_tolerance,
        dump_dir=dump_dir,
    )


def sample_chain(
    graph: Graph,
    cfg: SamplerConfig,
    chain_id: int = 0,
    n_samples: int | None = None,
    dump_dir: str | Path | None = None,
) -> Iterator[FieldSample]:
    """Stream of retained FieldSamples from one chain after burn-in.

    Args:
        graph: Connected graph
        cfg: Sampler settings; the chain's stream is keyed by (cfg.seed, chain_id)
        chain_id: Which chain of the configured family
        n_samples: Retained samples (default cfg.samples_per_chain)
        dump_dir: Where a non-finite state is saved before aborting

    Yields:
        FieldSample per retained state
    """
    chain = _chain(graph, cfg, chain_id, dump_dir)
    chain.burn_in(cfg.burn_in, cfg.adapt, cfg.target_acceptance)
    for state, _ in chain.samples(cfg.samples_per_chain if n_samples is None else n_samples, cfg.thinning):
        yield FieldSample(state, graph.root)


def run_chain(graph: Graph, cfg: SamplerConfig, chain_id: int, dump_dir: str | None = None) -> ChainResult:
    """Run one chain to completion and collect its retained samples."""
    chain = _chain(graph, cfg, chain_id, dump_dir)
    chain.burn_in(cfg.burn_in, cfg.adapt, cfg.target_acceptance)
    n = cfg.samples_per_chain
    samples = np.empty((n, graph.n_vertices))
    accepted = 0.0
    for i, (state, rate) in enumerate(chain.samples(n, cfg.thinning)):
        samples[i] = state
        accepted += rate
    logger.info(
        "Chain %d: %d samples, acceptance %.3f, sigma %.3f, max drift %.1e",
        chain_id,
        n,
        accepted / n,
        chain.step_size,
        chain.max_drift,
    )
    return ChainResult(
        chain_id=chain_id,
        samples=samples,
        acceptance_rate=accepted / n,
        step_size=chain.step_size,
        max_drift=chain.max_drift,
        n_refreshes=chain.n_refreshes,
    )
