"""
Decay scan: E[e^{s u_y}] on a wired box against the deformation bound

One sample set of the box field serves every target y. Each row compares the
Monte Carlo estimate with exp(-R(0,y) s²/(8q²(W̄+1))); the |y|^{-η} form is
carried along for information only, since it is claimed for large N only.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from vrjp_lab.deformation.bounds import classify
from vrjp_lab.deformation.harmonic import inf_norm
from vrjp_lab.deformation.plan import build_plan
from vrjp_lab.framework.config import LabConfig
from vrjp_lab.framework.errors import ConfigError
from vrjp_lab.framework.report.models import DecayRow, SlopeFit, Verdict
from vrjp_lab.graph.core import build_z2_box
from vrjp_lab.sampler.estimate import estimate_exp_moment
from vrjp_lab.sampler.samples import sample_field

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecayScan:
    """Rows of one scan, the fitted log-log slope and the Jensen verdicts."""

    rows: list[DecayRow]
    slope: SlopeFit | None
    verdicts: list[Verdict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def decay_targets(n: int, ys: list[list[int]]) -> list[tuple[int, int]]:
    """Validated targets: distinct sites of V_N other than the origin."""
    targets = []
    for y in ys:
        y = tuple(int(c) for c in y)
        if y == (0, 0):
            raise ConfigError("deformation.ys", "target y = 0 coincides with the root")
        if inf_norm(y) > n:
            raise ConfigError("deformation.ys", f"target {y} lies outside the box of radius {n}")
        if y not in targets:
            targets.append(y)
    return targets


def fit_decay_slope(rows: list[DecayRow], reference_slope: float, confidence: float = 0.95) -> SlopeFit | None:
    """Least-squares slope of ln(estimate) against ln|y|_∞ with a t-interval.

    Returns None with fewer than three usable rows or a single distinct |y|_∞.
    """
    usable = [row for row in rows if row.estimate > 0 and row.y_inf_norm >= 1]
    if len(usable) < 3 or len({row.y_inf_norm for row in usable}) < 2:
        return None
    x = np.log([row.y_inf_norm for row in usable])
    y = np.log([row.estimate for row in usable])
    fit = stats.linregress(x, y)
    half_width = stats.t.ppf(0.5 + confidence / 2.0, len(usable) - 2) * fit.stderr
    return SlopeFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        ci_low=float(fit.slope - half_width),
        ci_high=float(fit.slope + half_width),
        n_points=len(usable),
        reference_slope=reference_slope,
    )


def trend_note(rows: list[DecayRow]) -> str | None:
    """Compare the nearest and the farthest target at 3σ; a trend, not an invariant."""
    if len(rows) < 2:
        return None
    near = min(rows, key=lambda row: (row.y_inf_norm, row.y))
    far = max(rows, key=lambda row: (row.y_inf_norm, row.y))
    if near.y_inf_norm == far.y_inf_norm:
        return None
    sigma = math.hypot(near.stderr, far.stderr)
    if not math.isfinite(sigma):
        return f"trend {near.y} -> {far.y}: no standard error available"
    resolved = far.estimate < near.estimate - 3.0 * sigma
    verb = "decreases" if resolved else "is not resolved as decreasing"
    return (
        f"trend {near.y} -> {far.y}: estimate {verb} at 3σ "
        f"({near.estimate:.6g} -> {far.estimate:.6g}, σ={sigma:.2g})"
    )


def run_decay(config: LabConfig, executor=None) -> DecayScan:
    """Sample the box field once and build one DecayRow per target.

    Args:
        config: graph (a box), sampler and deformation sections are read
        executor: Optional Executor that runs the chains

    Returns:
        DecayScan

    Raises:
        ConfigError: If the graph is not a box, a target is invalid or W̄ is too small
    """
    if config.graph.kind != "box":
        raise ConfigError("graph.kind", f"the decay scan runs on a wired box, got {config.graph.kind!r}")
    deformation = config.deformation
    graph = build_z2_box(config.graph.n, config.graph.wh, config.graph.wv)
    if deformation.wbar < graph.max_unit_conductance:
        raise ConfigError(
            "deformation.wbar", f"W̄={deformation.wbar} is below the largest conductance {graph.max_unit_conductance}"
        )
    targets = decay_targets(config.graph.n, deformation.ys)

    logger.info(f"Sampling the box N={config.graph.n} ({graph.n_vertices} vertices) for {len(targets)} targets")
    samples = sample_field(graph, config.sampler, executor=executor)

    rows, verdicts = [], []
    for y in targets:
        plan = build_plan(graph, y, deformation.s, deformation.wbar)
        estimate = estimate_exp_moment(samples, y, deformation.s, config.sampler.n_batches)
        status = classify(estimate.estimate, plan.instance_bound, estimate.stderr, estimate.ess, deformation.ess_threshold)
        rows.append(
            DecayRow(
                n=config.graph.n,
                y=y,
                y_inf_norm=inf_norm(y),
                s=deformation.s,
                wbar=deformation.wbar,
                resistance=plan.resistance,
                eta_instance=plan.eta_instance,
                eta_asymptotic=plan.eta_asymptotic,
                bound=plan.instance_bound,
                polynomial_bound=plan.polynomial_bound,
                estimate=estimate.estimate,
                stderr=estimate.stderr,
                ess=estimate.ess,
                status=status,
            )
        )
        verdicts.append(
            Verdict(
                suite="decay",
                check="jensen_bound",
                instance=f"box N={config.graph.n}, y={y}, s={deformation.s}",
                observed=estimate.estimate,
                bound=1.0,
                tolerance=3.0 * estimate.stderr,
                status=classify(estimate.estimate, 1.0, estimate.stderr, estimate.ess, deformation.ess_threshold),
                reference="E[e^{s u_y}] ≤ E[e^{u_y}]^s = 1",
            )
        )
        logger.info(
            f"y={y}: R={plan.resistance:.4f} estimate={estimate.estimate:.6f}±{estimate.stderr:.2g} "
            f"bound={plan.instance_bound:.6f} [{status}]"
        )

    eta = rows[0].eta_asymptotic if rows else math.nan
    slope = fit_decay_slope(rows, -eta)
    notes = [f"|y|^(-η) with η={eta:.3g} is reported for information; only the exp(-R s²/(8q²(W̄+1))) bound is tested"]
    if slope is not None:
        notes.append(f"fitted slope {slope.slope:.4g} in [{slope.ci_low:.4g}, {slope.ci_high:.4g}] against -η={-eta:.3g}")
    note = trend_note(rows)
    if note is not None:
        notes.append(note)
    return DecayScan(rows=rows, slope=slope, verdicts=verdicts, notes=notes)
