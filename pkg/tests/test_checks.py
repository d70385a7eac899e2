"""
Unit tests for the check framework and the deterministic suite checks

Monte Carlo checks are exercised through the CLI smoke configuration;
here only checks with exact or quadrature oracles run, at small sizes.
"""

import pytest

import vrjp_lab.suites  # noqa: F401  (registers checks)
from vrjp_lab.framework import CheckContext, CheckRegistry, LabConfig, resolve_suites
from vrjp_lab.framework.check import Check, _snake_case
from vrjp_lab.framework.config import CheckConfig, SuiteConfig
from vrjp_lab.framework.report.models import FAIL, INCONCLUSIVE, PASS

SUITES = ["density", "moments", "tilt", "convexity", "taylor", "deformation", "mixture"]


@pytest.fixture
def context():
    return CheckContext(LabConfig())


class TestRegistry:
    """Test CheckRegistry and suite resolution."""

    def test_suites_in_order(self):
        assert CheckRegistry.suites() == SUITES

    def test_names_round_trip(self):
        """Every registered class survives snake_case and back."""
        for name in CheckRegistry.list_checks():
            assert CheckConfig(name=_snake_case(name)).get_class_name() == name

    def test_create_unknown(self):
        with pytest.raises(ValueError):
            CheckRegistry.create("NoSuchCheck")

    def test_create_with_params(self):
        check = CheckRegistry.create("TaylorGrid", {"n_q": 3, "n_points": 11})
        assert check.name == "taylor_grid"
        assert check.suite == "taylor"

    def test_unknown_param_rejected(self):
        with pytest.raises(TypeError):
            CheckRegistry.create("TaylorGrid", {"n_qs": 3})

    def test_resolve_all(self):
        """`all` expands to every suite; a configured suite replaces the default."""
        custom = SuiteConfig(name="taylor", checks=[CheckConfig(name="taylor_grid", params={"n_q": 2})])
        suites = resolve_suites("all", [custom])
        assert [suite.name for suite in suites] == SUITES
        assert suites[SUITES.index("taylor")] is custom

    def test_resolve_unknown_suite(self):
        with pytest.raises(ValueError):
            resolve_suites("nope", [])

    def test_default_suite_lists_checks(self):
        names = [check.name for check in CheckRegistry.default_suite("mixture").checks]
        assert names == ["first_jump", "second_jump", "mixture_identity", "jump_chain_bookkeeping"]


class TestCheckHelpers:
    """Test the verdict helpers on Check."""

    class Sketch(Check):
        suite = "sketch"
        reference = "helpers"

        def _run_impl(self, context):
            return [
                self.close("close", 1.0, 1.0 + 1e-9, 1e-8),
                self.at_most("at_most", 2.0, 1.0),
                self.at_least("at_least", 1.0, 1.0),
                self.within_sigma("sigma", 1.05, 1.0, 0.01),
                self.within_sigma("no sigma", 1.0, 1.0, float("nan")),
                self.within_sigma("low ess", 1.0, 1.0, 0.01, ess=10.0, ess_threshold=200.0),
            ]

    def test_statuses_and_stats(self, context):
        sketch = self.Sketch()
        verdicts = sketch.run(context)
        assert [v.status for v in verdicts] == [PASS, FAIL, PASS, FAIL, INCONCLUSIVE, INCONCLUSIVE]
        assert all(v.suite == "sketch" and v.check == "sketch" for v in verdicts)
        stats = sketch.get_stats()
        assert stats["runs"] == 1
        assert stats["verdicts"] == 6

    def test_nan_never_passes_close(self, context):
        sketch = self.Sketch()
        assert sketch.close("nan", float("nan"), 1.0, 10.0).status == FAIL


class TestDeterministicChecks:
    """Run exact-oracle checks end to end at small sizes."""

    @pytest.mark.parametrize(
        "name,params",
        [
            ("TreePolynomialClosedForms", {}),
            ("MatrixTreeOracle", {"n_graphs": 10}),
            ("ShiftCovariance", {"n_graphs": 5}),
            ("RnRatioConsistency", {"n_instances": 10}),
            ("TiltedWeightsBound", {"n_instances": 10}),
            ("ConvexityScan", {"n_instances": 5}),
            ("HolderCombination", {"n_instances": 5}),
            ("TaylorGrid", {"n_q": 10, "n_points": 51}),
            ("GammaTildeOptimum", {"s_values": [0.5], "wbar_values": [1.0]}),
            ("HarmonicClosedForms", {}),
            ("BoxResistance", {"radii": [2]}),
            ("ResistanceMonotonicity", {"max_radius": 3}),
            ("NashWilliamsAsymptotics", {}),
            ("PlanConstants", {}),
            ("HypothesisRefusal", {}),
            ("JumpChainBookkeeping", {"n_trajectories": 5}),
        ],
    )
    def test_check_passes(self, context, name, params):
        verdicts = CheckRegistry.create(name, params).run(context)
        assert verdicts
        failing = [v.describe() for v in verdicts if not v.passed]
        assert failing == []

    def test_seeded_checks_repeat(self, context):
        """A check driven by the context seed gives identical verdicts twice."""
        first = CheckRegistry.create("MatrixTreeOracle", {"n_graphs": 5}).run(context)
        again = CheckRegistry.create("MatrixTreeOracle", {"n_graphs": 5}).run(CheckContext(LabConfig()))
        assert [v.observed for v in first] == [v.observed for v in again]
