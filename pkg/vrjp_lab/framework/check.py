"""
Check: Base class for verification checks

A check evaluates one property or bound on a set of desk-scale instances and
returns Verdicts. Checks are grouped into suites and instantiated by name
from YAML.
"""

import json
import math
import re
import time
from abc import ABC, abstractmethod
from dataclasses import asdict
from typing import Any

import numpy as np

from .config import LabConfig, SamplerConfig
from .report.models import FAIL, INCONCLUSIVE, PASS, Verdict
from .seeding import stream


class CheckContext:
    """Shared state handed to every check of a `verify` run.

    Holds the lab config, the executor (None for in-process runs) and the
    master seed. Field samples are cached per (graph, sampler config) so that
    several checks can reuse one expensive sampling run.
    """

    def __init__(self, config: LabConfig, executor=None, seed: int | None = None):
        self.config = config
        self.executor = executor
        self.seed = config.executor.seed if seed is None else seed
        self._samples: dict[tuple[str, str], Any] = {}

    def rng(self, *key: int | str) -> np.random.Generator:
        """Independent stream for one check instance."""
        return stream(self.seed, *key)

    def sampler_config(self, **overrides) -> SamplerConfig:
        """The configured sampler settings with per-check overrides; the seed follows the run."""
        params = {**asdict(self.config.sampler), "seed": self.seed, **overrides}
        return SamplerConfig(**params)

    def samples(self, graph, cfg: SamplerConfig):
        from vrjp_lab.sampler.samples import sample_field

        key = (graph.digest(), json.dumps(asdict(cfg), sort_keys=True))
        if key not in self._samples:
            self._samples[key] = sample_field(graph, cfg, executor=self.executor)
        return self._samples[key]


def _snake_case(name: str) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", name).lower()


class Check(ABC):
    """Abstract base class for all checks.

    Subclasses set `suite` and `reference` and implement `_run_impl`. The
    constructor receives the check's `params` from config as keyword
    arguments; unknown names are rejected by Python itself.
    """

    suite: str = ""
    reference: str = ""

    def __init__(self):
        self._stats = {"runs": 0, "verdicts": 0, "total_time": 0.0, "max_time": 0.0}

    @property
    def name(self) -> str:
        return _snake_case(type(self).__name__)

    def run(self, context: CheckContext) -> list[Verdict]:
        """Run the check with timing."""
        start = time.perf_counter()
        verdicts = self._run_impl(context)
        elapsed = time.perf_counter() - start

        self._stats["runs"] += 1
        self._stats["verdicts"] += len(verdicts)
        self._stats["total_time"] += elapsed
        self._stats["max_time"] = max(self._stats["max_time"], elapsed)
        return verdicts

    @abstractmethod
    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        """Evaluate the property; implemented by each check."""
        pass

    def get_stats(self) -> dict[str, Any]:
        """Runs, verdicts produced and wall-clock seconds."""
        return dict(self._stats)

    def verdict(
        self,
        instance: str,
        observed: float,
        bound: float,
        tolerance: float,
        status: str,
        detail: dict[str, Any] | None = None,
    ) -> Verdict:
        return Verdict(
            suite=self.suite,
            check=self.name,
            instance=instance,
            observed=float(observed),
            bound=float(bound),
            tolerance=float(tolerance),
            status=status,
            reference=self.reference,
            detail=detail or {},
        )

    def close(self, instance: str, observed: float, expected: float, tolerance: float, **detail) -> Verdict:
        """pass iff |observed - expected| ≤ tolerance."""
        status = PASS if abs(observed - expected) <= tolerance else FAIL
        if not math.isfinite(observed):
            status = FAIL
        return self.verdict(instance, observed, expected, tolerance, status, detail)

    def at_most(self, instance: str, observed: float, bound: float, tolerance: float = 0.0, **detail) -> Verdict:
        """pass iff observed ≤ bound + tolerance."""
        status = PASS if observed <= bound + tolerance else FAIL
        return self.verdict(instance, observed, bound, tolerance, status, detail)

    def at_least(self, instance: str, observed: float, bound: float, tolerance: float = 0.0, **detail) -> Verdict:
        """pass iff observed ≥ bound - tolerance."""
        status = PASS if observed >= bound - tolerance else FAIL
        return self.verdict(instance, observed, bound, tolerance, status, detail)

    def within_sigma(
        self,
        instance: str,
        observed: float,
        expected: float,
        stderr: float,
        ess: float | None = None,
        ess_threshold: float = 0.0,
        n_sigma: float = 3.0,
        **detail,
    ) -> Verdict:
        """Two-sided Monte Carlo comparison; inconclusive when σ is unavailable or ESS is low."""
        if not math.isfinite(stderr) or (ess is not None and not ess >= ess_threshold):
            status = INCONCLUSIVE
        else:
            status = PASS if abs(observed - expected) <= n_sigma * stderr else FAIL
        return self.verdict(instance, observed, expected, n_sigma * stderr, status, {"stderr": stderr, **detail})
