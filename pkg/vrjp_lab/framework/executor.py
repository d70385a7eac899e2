"""
Executor: Fans independent jobs out to workers

Jobs run on a pool of ChainWorker actors when Ray is enabled and more than
one thread is requested, in-process otherwise. Results always come back in
job order, so aggregation is identical either way.
"""

import logging
from collections.abc import Callable
from typing import Any

import ray

from .config import ExecutorConfig

logger = logging.getLogger(__name__)


class Executor:
    """Executor maps job functions over keyword-argument dicts."""

    def __init__(self, config: ExecutorConfig):
        """Initialize executor from configuration.

        Args:
            config: Executor section of the lab configuration
        """
        self.config = config
        self.parallel = config.parallel
        self.workers: list[Any] = []
        self._next_worker = 0
        self._owns_ray = False

        if self.parallel:
            from .worker import ChainWorker

            self._owns_ray = not ray.is_initialized()
            if self._owns_ray:
                ray.init(num_cpus=config.threads, ignore_reinit_error=True, log_to_driver=False)
            self.workers = [ChainWorker.remote(f"w{i}") for i in range(config.threads)]
            logger.info("Started %d Ray workers", len(self.workers))

    def map(self, fn: Callable[..., Any], jobs: list[dict[str, Any]]) -> list[Any]:
        """Run fn(**job) for every job and return results in job order."""
        if not self.parallel:
            return [fn(**job) for job in jobs]

        refs = []
        for job in jobs:
            # Round-robin across workers
            worker = self.workers[self._next_worker % len(self.workers)]
            self._next_worker += 1
            refs.append(worker.run.remote(fn, job))
        return ray.get(refs)

    def get_stats(self) -> list[dict[str, Any]]:
        if not self.workers:
            return []
        return ray.get([worker.get_stats.remote() for worker in self.workers])

    def shutdown(self):
        """Release workers; Ray itself is shut down only if we started it."""
        if self.workers:
            for worker in self.workers:
                ray.kill(worker)
            self.workers = []
        if self._owns_ray:
            ray.shutdown()
            self._owns_ray = False

    def __enter__(self) -> "Executor":
        return self

    def __exit__(self, *exc):
        self.shutdown()
