"""
Errors: Domain exceptions raised across the laboratory

Every error subclasses a builtin so callers can catch either the precise
class or the generic one.
"""

from pathlib import Path
from typing import Any

import numpy as np


class ConfigError(ValueError):
    """Invalid configuration value, reported with its field path."""

    def __init__(self, field_path: str, message: str, line: int | None = None):
        self.field_path = field_path
        self.line = line
        location = f" (line {line})" if line is not None else ""
        super().__init__(f"{field_path}{location}: {message}")


class StructuralError(ValueError):
    """Graph structure makes the requested quantity undefined (disconnected, singular)."""


class PinningError(ValueError):
    """Field sample is not pinned at the root (u[root] != 0)."""


class UnknownVertexError(KeyError):
    """Vertex id is not part of the graph."""


class FieldOverflowError(OverflowError):
    """A gradient is too large for exp() in double precision."""


class QuadratureDimensionError(ValueError):
    """Tensor-grid quadrature requested on too many free coordinates."""


class HypothesisViolation(ValueError):
    """A bound was requested outside the region where it is claimed."""


class SamplerDriftError(RuntimeError):
    """Incrementally maintained log-determinant drifted from a fresh factorization."""

    def __init__(self, drift: float, tolerance: float, sweep: int):
        self.drift = drift
        self.tolerance = tolerance
        self.sweep = sweep
        super().__init__(f"ln D drift {drift:.3e} exceeds {tolerance:.1e} at sweep {sweep}")


class NonFiniteDensityError(RuntimeError):
    """Log-density evaluated to a non-finite value; the offending state is kept for inspection."""

    def __init__(self, state: np.ndarray, chain_id: int, dump_path: Path | None = None):
        self.state = np.asarray(state, dtype=np.float64).copy()
        self.chain_id = chain_id
        self.dump_path = dump_path
        where = f", state saved to {dump_path}" if dump_path is not None else ""
        super().__init__(f"non-finite log-density in chain {chain_id}{where}")

    def persist(self, directory: str | Path) -> Path:
        """Save the offending state as .npy and remember where it went."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"nonfinite_chain_{self.chain_id}.npy"
        np.save(path, self.state)
        self.dump_path = path
        return path

    def to_dict(self) -> dict[str, Any]:
        return {"chain_id": self.chain_id, "state": self.state.tolist(), "dump_path": str(self.dump_path)}
