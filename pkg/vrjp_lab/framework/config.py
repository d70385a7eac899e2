"""
Configuration Management

YAML-based configuration classes for the laboratory. Every CLI flag has a
field here; reports embed `LabConfig.to_dict()` so they can be re-run.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError


@dataclass
class GraphConfig:
    """Which graph to build.

    kind: `box` (n, wh, wv), `edge_list` (path, root) or a named instance
    (`two_vertex`, `triangle`, `path`, `cycle` with w and size).
    """

    kind: str = "box"
    n: int = 3
    wh: float = 1.0
    wv: float = 1.0
    w: float = 1.0
    size: int | None = None
    path: str | None = None
    root: int | None = None

    def __post_init__(self):
        if self.kind == "box" and (int(self.n) != self.n or self.n < 1):
            raise ConfigError("graph.n", f"box radius must be a positive integer, got {self.n}")
        for name in ("wh", "wv", "w"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"graph.{name}", f"conductance must be positive, got {getattr(self, name)}")

    def build(self):
        """Instantiate the configured graph."""
        from vrjp_lab.graph.io import make_graph

        params = {"n": self.n, "wh": self.wh, "wv": self.wv, "w": self.w, "path": self.path, "root": self.root}
        if self.size is not None:
            params["size"] = self.size
        return make_graph(self.kind, **params)


@dataclass
class SamplerConfig:
    """Metropolis sampler settings for the mixing field.

    Attributes:
        step_size: Initial proposal standard deviation σ
        burn_in: Sweeps discarded per chain (σ adapts during these only)
        thinning: Sweeps between retained samples
        n_chains: Independent chains
        n_samples: Retained samples in total, split evenly across chains
        seed: Master seed of the chain streams; None follows executor.seed (0 outside a LabConfig)
        refresh_period: Sweeps between full refactorizations (K)
        target_acceptance: Acceptance rate targeted during burn-in
        adapt: Whether σ adapts during burn-in
        drift_tolerance: Allowed |incremental - fresh| ln D at a refresh
        n_batches: Batches per chain for batch-means standard errors
    """

    step_size: float = 1.0
    burn_in: int = 500
    thinning: int = 2
    n_chains: int = 4
    n_samples: int = 20000
    seed: int | None = None
    refresh_period: int = 50
    target_acceptance: float = 0.3
    adapt: bool = True
    drift_tolerance: float = 1e-6
    n_batches: int = 20

    def __post_init__(self):
        if self.step_size <= 0:
            raise ConfigError("sampler.step_size", f"must be > 0, got {self.step_size}")
        for name in ("n_chains", "n_samples", "refresh_period", "n_batches", "thinning"):
            if getattr(self, name) < 1:
                raise ConfigError(f"sampler.{name}", f"must be >= 1, got {getattr(self, name)}")
        if self.burn_in < 0:
            raise ConfigError("sampler.burn_in", f"must be >= 0, got {self.burn_in}")
        if not 0 < self.target_acceptance < 1:
            raise ConfigError("sampler.target_acceptance", f"must lie in (0, 1), got {self.target_acceptance}")
        if self.n_samples < self.n_chains:
            raise ConfigError("sampler.n_samples", f"needs at least one sample per chain ({self.n_chains} chains)")

    @property
    def samples_per_chain(self) -> int:
        return self.n_samples // self.n_chains


@dataclass
class VrjpConfig:
    """VRJP simulation settings (jump-chain horizon k and number of runs)."""

    k: int = 3
    n_runs: int = 1_000_000
    batch_size: int = 100_000
    start: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("vrjp.k", f"must be >= 1, got {self.k}")
        if self.n_runs < 1 or self.batch_size < 1:
            raise ConfigError("vrjp.n_runs", "n_runs and batch_size must be >= 1")


@dataclass
class DeformationConfig:
    """Decay-scan and deformation-bound settings."""

    s: float = 0.5
    wbar: float = 1.0
    ys: list[list[int]] = field(default_factory=lambda: [[1, 0], [2, 0], [3, 0], [2, 2]])
    ess_threshold: float = 200.0

    def __post_init__(self):
        if not 0 < self.s < 1:
            raise ConfigError("deformation.s", f"must lie in (0, 1), got {self.s}")
        if self.wbar <= 0:
            raise ConfigError("deformation.wbar", f"must be > 0, got {self.wbar}")
        for y in self.ys:
            if len(y) != 2:
                raise ConfigError("deformation.ys", f"each target must be an [x, y] pair, got {y}")
            if tuple(y) == (0, 0):
                raise ConfigError("deformation.ys", "target y = 0 coincides with the root")


@dataclass
class CheckConfig:
    """Configuration for a single verification check."""

    name: str  # Check name (e.g., "matrix_tree_oracle") -> class name (e.g., "MatrixTreeOracle")
    params: dict[str, Any] = field(default_factory=dict)
    enabled: bool = True

    def get_class_name(self) -> str:
        """Convert snake_case name to PascalCase class name."""
        return "".join(word.capitalize() for word in self.name.split("_"))


@dataclass
class SuiteConfig:
    """A named group of checks run by `verify <name>`."""

    name: str
    checks: list[CheckConfig] = field(default_factory=list)


@dataclass
class ExecutorConfig:
    """Execution settings shared by every command."""

    seed: int = 2019
    threads: int = 1
    use_ray: bool = True
    out_dir: str = "./output"

    def __post_init__(self):
        if self.threads < 1:
            raise ConfigError("executor.threads", f"must be >= 1, got {self.threads}")

    @property
    def parallel(self) -> bool:
        return self.use_ray and self.threads > 1


_SECTIONS = {
    "graph": GraphConfig,
    "sampler": SamplerConfig,
    "vrjp": VrjpConfig,
    "deformation": DeformationConfig,
    "executor": ExecutorConfig,
}


@dataclass
class LabConfig:
    """Complete laboratory configuration."""

    graph: GraphConfig = field(default_factory=GraphConfig)
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    vrjp: VrjpConfig = field(default_factory=VrjpConfig)
    deformation: DeformationConfig = field(default_factory=DeformationConfig)
    executor: ExecutorConfig = field(default_factory=ExecutorConfig)
    suites: list[SuiteConfig] = field(default_factory=list)

    def __post_init__(self):
        # chains follow the master seed unless the sampler section sets its own
        if self.sampler.seed is None:
            self.sampler = replace(self.sampler, seed=self.executor.seed)

    @classmethod
    def from_yaml(cls, config_path: str | Path) -> "LabConfig":
        """Load configuration from a YAML file.

        A JSON report written by this package is also accepted: its embedded
        `config` block is used, which makes every report re-runnable.

        Args:
            config_path: Path to YAML (or report JSON) file

        Returns:
            LabConfig instance
        """
        try:
            with open(config_path) as f:
                if str(config_path).endswith(".json"):
                    config_dict = json.load(f)
                else:
                    config_dict = yaml.safe_load(f) or {}
        except json.JSONDecodeError as e:
            raise ConfigError(str(config_path), f"invalid JSON: {e.msg}", line=e.lineno) from None
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            line = mark.line + 1 if mark is not None else None
            raise ConfigError(str(config_path), f"invalid YAML: {getattr(e, 'problem', e)}", line=line) from None

        if not isinstance(config_dict, dict):
            raise ConfigError(str(config_path), "top level must be a mapping")
        if "config" in config_dict and "verdicts" in config_dict:
            config_dict = config_dict["config"]
        return cls.from_dict(config_dict)

    @classmethod
    def from_dict(cls, config_dict: dict[str, Any]) -> "LabConfig":
        """Build from a plain dict, reporting unknown or invalid fields by path."""
        unknown = set(config_dict) - set(_SECTIONS) - {"suites"}
        if unknown:
            raise ConfigError(sorted(unknown)[0], f"unknown section; expected one of {sorted([*_SECTIONS, 'suites'])}")

        sections = {}
        for name, section_cls in _SECTIONS.items():
            section_dict = config_dict.get(name) or {}
            if not isinstance(section_dict, dict):
                raise ConfigError(name, "section must be a mapping")
            allowed = {f.name for f in fields(section_cls)}
            for key in section_dict:
                if key not in allowed:
                    raise ConfigError(f"{name}.{key}", f"unknown field; expected one of {sorted(allowed)}")
            sections[name] = section_cls(**section_dict)

        suite_configs = []
        for i, suite_dict in enumerate(config_dict.get("suites") or []):
            if "name" not in suite_dict:
                raise ConfigError(f"suites[{i}].name", "suite needs a name")
            checks = []
            for j, check_dict in enumerate(suite_dict.get("checks") or []):
                if isinstance(check_dict, str):
                    check_dict = {"name": check_dict}
                if "name" not in check_dict:
                    raise ConfigError(f"suites[{i}].checks[{j}].name", "check needs a name")
                checks.append(CheckConfig(**check_dict))
            suite_configs.append(SuiteConfig(name=suite_dict["name"], checks=checks))

        return cls(**sections, suites=suite_configs)

    def to_dict(self) -> dict[str, Any]:
        """Plain, JSON-serialisable dict (round-trips through from_dict)."""
        return json.loads(json.dumps(asdict(self), sort_keys=True))

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form."""
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()

    def apply_overrides(
        self,
        seed: int | None = None,
        threads: int | None = None,
        out_dir: str | None = None,
    ) -> "LabConfig":
        """Apply global CLI flags in place; the seed reaches every random stream."""
        if seed is not None:
            self.executor.seed = seed
            self.sampler.seed = seed
        if threads is not None:
            self.executor.threads = threads
            self.executor.__post_init__()
        if out_dir is not None:
            self.executor.out_dir = out_dir
        return self
