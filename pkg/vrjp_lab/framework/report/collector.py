"""
Report collector with context-manager timing

Gathers verdicts and decay rows while a command runs and assembles the
ExperimentReport at the end. Durations are kept apart from the report.
"""

import hashlib
import platform
import time
from contextlib import contextmanager
from importlib import metadata as importlib_metadata
from typing import Any

import numpy as np
import pyarrow as pa
import scipy

from .models import DecayRow, ExperimentReport, RunMetadata, SlopeFit, Verdict


def library_versions() -> dict[str, str]:
    try:
        own = importlib_metadata.version("vrjp-lab")
    except importlib_metadata.PackageNotFoundError:
        own = "unknown"
    return {
        "vrjp_lab": own,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pyarrow": pa.__version__,
        "python": platform.python_version(),
    }


class ReportCollector:
    """Collects verdicts, decay rows and per-check timings for one command run."""

    def __init__(self, command: str, config: dict[str, Any], seed: int, config_digest: str):
        self.command = command
        self.config = config
        self.seed = seed
        self.config_digest = config_digest
        self.run_id = self._generate_run_id(command, config_digest, seed)

        self._verdicts: list[Verdict] = []
        self._decay_rows: list[DecayRow] = []
        self._notes: list[str] = []
        self._slope: SlopeFit | None = None
        self._timings: dict[str, float] = {}
        self._run_duration: float | None = None

    @staticmethod
    def _generate_run_id(command: str, config_digest: str, seed: int) -> str:
        """Deterministic run ID: the same command, config and seed give the same ID."""
        digest = hashlib.sha256(f"{command}:{config_digest}:{seed}".encode()).hexdigest()[:12]
        return f"run_{command}_{digest}"

    @contextmanager
    def track_run(self):
        """Time the whole command.

        Example:
            with collector.track_run():
                run_suites(...)
        """
        start = time.perf_counter()
        try:
            yield self
        finally:
            self._run_duration = time.perf_counter() - start

    @contextmanager
    def track_check(self, name: str):
        """Time one check; repeated names accumulate."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self._timings[name] = self._timings.get(name, 0.0) + time.perf_counter() - start

    def add_verdicts(self, verdicts: list[Verdict]):
        self._verdicts.extend(verdicts)

    def add_decay_row(self, row: DecayRow):
        self._decay_rows.append(row)

    def set_slope(self, slope: SlopeFit | None):
        self._slope = slope

    def add_note(self, note: str):
        self._notes.append(note)

    @property
    def verdicts(self) -> list[Verdict]:
        return list(self._verdicts)

    def timings(self) -> dict[str, Any]:
        """Wall-clock seconds per check and for the run."""
        return {"run_id": self.run_id, "run_seconds": self._run_duration, "checks": dict(self._timings)}

    def build_report(self) -> ExperimentReport:
        return ExperimentReport(
            metadata=RunMetadata(
                run_id=self.run_id,
                command=self.command,
                seed=self.seed,
                config_digest=self.config_digest,
                versions=library_versions(),
            ),
            config=self.config,
            verdicts=list(self._verdicts),
            decay_rows=list(self._decay_rows),
            slope=self._slope,
            notes=list(self._notes),
        )
