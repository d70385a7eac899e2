"""
Worker: Runs independent jobs on a Ray node

Provides ChainWorker, a Ray actor that executes job functions (MCMC chains,
VRJP run batches, decay-scan points) and keeps per-worker counters.
"""

import logging
import time
from collections.abc import Callable
from typing import Any

import ray


@ray.remote
class ChainWorker:
    """Ray actor for distributed job execution.

    Jobs are plain functions called with keyword arguments; they must not
    share mutable state, so results do not depend on which worker ran them.
    """

    def __init__(self, name: str):
        self.name = name

        # Ray logs appear in the Ray Dashboard
        self.logger = logging.getLogger(f"ChainWorker.{name}")
        self.logger.setLevel(logging.INFO)

        self.job_count = 0
        self.busy_time = 0.0

    def run(self, fn: Callable[..., Any], job: dict[str, Any]) -> Any:
        """Execute one job and return its result."""
        start = time.perf_counter()
        result = fn(**job)
        self.busy_time += time.perf_counter() - start
        self.job_count += 1
        self.logger.info(f"[Worker {self.name}] job {self.job_count} ({fn.__name__}) done")
        return result

    def get_stats(self) -> dict[str, Any]:
        return {"name": self.name, "jobs": self.job_count, "busy_time": self.busy_time}
