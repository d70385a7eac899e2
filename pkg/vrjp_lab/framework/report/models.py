"""
Report data models

Immutable dataclasses for check verdicts, decay-scan rows and complete
experiment reports. Reports hold no wall-clock data, so a rerun with the
same config reproduces them byte for byte; timing goes to a separate file.
"""

import math
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}


def _json_number(value: float | None) -> float | None:
    """NaN and infinities become None in JSON output."""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check on one instance.

    Attributes:
        suite: Suite the check belongs to (e.g., "density")
        check: Check name (e.g., "normalization")
        instance: Human-readable instance description
        observed: Observed value
        bound: Value it is compared against
        tolerance: Allowed deviation
        status: pass / fail / inconclusive
        reference: Named property or bound the verdict refers to
        detail: Extra diagnostics
    """

    suite: str
    check: str
    instance: str
    observed: float
    bound: float
    tolerance: float
    status: str
    reference: str
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "suite": self.suite,
            "check": self.check,
            "instance": self.instance,
            "observed": _json_number(self.observed),
            "bound": _json_number(self.bound),
            "tolerance": _json_number(self.tolerance),
            "status": self.status,
            "reference": self.reference,
            "detail": self.detail,
        }

    def describe(self) -> str:
        return (
            f"[{self.status.upper()}] {self.suite}/{self.check} {self.instance}: "
            f"observed={self.observed:.6g} bound={self.bound:.6g} tol={self.tolerance:.1e} ({self.reference})"
        )


@dataclass(frozen=True)
class DecayRow:
    """One target y of a decay scan; `bound` is exp(-R s²/(8q²(W̄+1)))."""

    n: int
    y: tuple[int, int]
    y_inf_norm: int
    s: float
    wbar: float
    resistance: float
    eta_instance: float | None
    eta_asymptotic: float
    bound: float
    polynomial_bound: float | None
    estimate: float
    stderr: float
    ess: float
    status: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.n,
            "y_x": self.y[0],
            "y_y": self.y[1],
            "y_inf_norm": self.y_inf_norm,
            "s": self.s,
            "Wbar": self.wbar,
            "R": self.resistance,
            "eta_instance": _json_number(self.eta_instance),
            "eta_asymptotic": self.eta_asymptotic,
            "bound": self.bound,
            "polynomial_bound": _json_number(self.polynomial_bound),
            "estimate": self.estimate,
            "stderr": _json_number(self.stderr),
            "ess": _json_number(self.ess),
            "status": self.status,
        }

    def to_csv_row(self) -> dict[str, Any]:
        """Row for the `N,y_x,y_y,s,Wbar,R,eta_instance,eta_asymptotic,bound,estimate,stderr,pass` table."""
        return {
            "N": self.n,
            "y_x": self.y[0],
            "y_y": self.y[1],
            "s": self.s,
            "Wbar": self.wbar,
            "R": self.resistance,
            "eta_instance": self.eta_instance,
            "eta_asymptotic": self.eta_asymptotic,
            "bound": self.bound,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "pass": self.status,
        }


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares slope of ln E[e^{s u_y}] against ln|y|_∞, with a 95% interval."""

    slope: float
    intercept: float
    ci_low: float
    ci_high: float
    n_points: int
    reference_slope: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "slope": _json_number(self.slope),
            "intercept": _json_number(self.intercept),
            "ci_low": _json_number(self.ci_low),
            "ci_high": _json_number(self.ci_high),
            "n_points": self.n_points,
            "reference_slope": self.reference_slope,
        }


@dataclass(frozen=True)
class RunMetadata:
    """Run identity: deterministic id, seed, config digest and library versions."""

    run_id: str
    command: str
    seed: int
    config_digest: str
    versions: dict[str, str]

    def to_dict(self) -> dict[str, Any]:
        return {
            "run_id": self.run_id,
            "command": self.command,
            "seed": self.seed,
            "config_digest": self.config_digest,
            "versions": dict(sorted(self.versions.items())),
        }


@dataclass(frozen=True)
class ExperimentReport:
    """Self-contained report: metadata, embedded config, verdicts and optional decay table."""

    metadata: RunMetadata
    config: dict[str, Any]
    verdicts: list[Verdict] = field(default_factory=list)
    decay_rows: list[DecayRow] = field(default_factory=list)
    slope: SlopeFit | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        statuses = [v.status for v in self.verdicts] + [row.status for row in self.decay_rows]
        if FAIL in statuses:
            return FAIL
        if INCONCLUSIVE in statuses:
            return INCONCLUSIVE
        return PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def counts(self) -> dict[str, int]:
        statuses = [v.status for v in self.verdicts] + [row.status for row in self.decay_rows]
        return {status: statuses.count(status) for status in (PASS, FAIL, INCONCLUSIVE)}

    def to_dict(self) -> dict[str, Any]:
        return {
            "metadata": self.metadata.to_dict(),
            "config": self.config,
            "status": self.status,
            "counts": self.counts(),
            "verdicts": [v.to_dict() for v in self.verdicts],
            "decay": [row.to_dict() for row in self.decay_rows],
            "slope": None if self.slope is None else self.slope.to_dict(),
            "notes": list(self.notes),
        }
