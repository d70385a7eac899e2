"""
Taylor suite: the second-order remainder bound and the choice of γ̃
"""

import numpy as np

from vrjp_lab.deformation.bounds import taylor_grid_scan, taylor_remainder_check
from vrjp_lab.deformation.plan import gamma_tilde_optimum
from vrjp_lab.framework.check import Check, CheckContext
from vrjp_lab.framework.report.models import FAIL, PASS, Verdict


class TaylorGrid(Check):
    """|(1-1/q)e^{qγt} + 1/q - e^{(q-1)γt}| ≤ 2q²γ²t² ≤ ½ over the admissible region q²γ|t| ≤ ½."""

    suite = "taylor"
    reference = "second-order Taylor bound with e^{1/2} ≤ 2"

    def __init__(self, n_q: int = 200, q_max: float = 10.0, n_points: int = 401):
        super().__init__()
        self.n_q = n_q
        self.q_max = q_max
        self.n_points = n_points

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        q_values = np.linspace(1.0, self.q_max, self.n_q + 1)[1:]
        scan = taylor_grid_scan(q_values, self.n_points)
        boundary = taylor_remainder_check(2.0, 1.0 / 8.0, 1.0)
        return [
            self.verdict(
                f"q in (1, {self.q_max}], {scan.n_points} points",
                scan.n_violations,
                0.0,
                0.0,
                PASS if scan.n_violations == 0 else FAIL,
                {"max_remainder_over_quadratic": scan.max_ratio},
            ),
            self.verdict("q=2, γt=1/8 on the boundary", float(boundary), 1.0, 0.0, PASS if boundary else FAIL),
        ]


class GammaTildeOptimum(Check):
    """γ̃ = s/(4q²(W̄+1)) maximises γ̃s - 2γ̃²q²(W̄+1) and respects γ̃ ≤ 1/(2q²)."""

    suite = "taylor"
    reference = "optimal γ̃ of the deformation"

    def __init__(self, s_values: list[float] | None = None, wbar_values: list[float] | None = None):
        super().__init__()
        self.s_values = s_values or [0.1, 0.25, 0.5, 0.75, 0.9]
        self.wbar_values = wbar_values or [0.5, 1.0, 4.0]

    def _run_impl(self, context: CheckContext) -> list[Verdict]:
        verdicts = []
        for s in self.s_values:
            for wbar in self.wbar_values:
                grid_best, formula = gamma_tilde_optimum(s, wbar)
                q = 1.0 / (1.0 - s)
                spacing = 1.0 / (2.0 * q**2) / 100_000
                verdicts.append(
                    self.close(
                        f"s={s}, W̄={wbar}", grid_best, formula, spacing, admissible=formula <= 1.0 / (2.0 * q**2)
                    )
                )
        _, formula = gamma_tilde_optimum(0.5, 1.0)
        verdicts.append(self.close("s=1/2, W̄=1: γ̃ = 1/64", formula, 1.0 / 64.0, 1e-15))
        return verdicts
