"""
Unit tests for the command line and the decay scan helpers

Commands run in-process (threads=1) on small instances.
"""

import json
import math
import tempfile
from pathlib import Path

import pytest

from vrjp_lab.cli import build_parser, main, parse_label
from vrjp_lab.experiments.decay import decay_targets, fit_decay_slope, trend_note
from vrjp_lab.framework.errors import ConfigError
from vrjp_lab.framework.report.models import PASS, DecayRow
from vrjp_lab.graph.io import read_edge_list
from vrjp_lab.writers.table_writer import read_csv_rows


def run_cli(*argv: str) -> int:
    with pytest.raises(SystemExit) as excinfo:
        main(list(argv))
    return excinfo.value.code


def make_row(norm: int, estimate: float, stderr: float = 0.001) -> DecayRow:
    return DecayRow(
        n=8,
        y=(norm, 0),
        y_inf_norm=norm,
        s=0.5,
        wbar=1.0,
        resistance=0.5,
        eta_instance=None,
        eta_asymptotic=1.0 / 2048.0,
        bound=0.99,
        polynomial_bound=None,
        estimate=estimate,
        stderr=stderr,
        ess=1000.0,
        status=PASS,
    )


class TestParser:
    """Test argument parsing."""

    def test_subcommands(self):
        parser = build_parser()
        args = parser.parse_args(["verify", "density", "--seed", "7"])
        assert args.command == "verify"
        assert args.suite == "density"
        assert args.seed == 7
        args = parser.parse_args(["decay", "--n", "4", "--y", "1,0", "--y", "2,0", "--chains", "2"])
        assert args.y == ["1,0", "2,0"]
        assert args.n_chains == 2

    def test_parse_label(self):
        assert parse_label("2,0") == (2, 0)
        assert parse_label(" -1, 3") == (-1, 3)
        assert parse_label("4") == 4

    @pytest.mark.parametrize("text", ["a", "1,2,3", "1,"])
    def test_parse_label_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_label(text)

    def test_no_command_prints_help(self, capsys):
        assert run_cli() == 0
        assert "vlab" in capsys.readouterr().out


class TestCommands:
    """Run commands end to end."""

    def test_resistance(self):
        """R(0,y) table, report and exit code 0 on a small box."""
        with tempfile.TemporaryDirectory() as tmpdir:
            code = run_cli("resistance", "--n", "2", "--y", "1,0", "--y", "2,0", "--out-dir", tmpdir, "--threads", "1")
            rows = read_csv_rows(f"{tmpdir}/resistance.csv")
            report = json.loads(Path(f"{tmpdir}/resistance_report.json").read_text())
            assert Path(f"{tmpdir}/resistance_timing.json").exists()
        assert code == 0
        assert [(row["y_x"], row["y_y"]) for row in rows] == [(1, 0), (2, 0)]
        assert rows[0]["nash_williams"] is None
        assert rows[1]["R"] >= rows[1]["nash_williams"]
        assert all(row["max_current"] <= 1.0 + 1e-8 for row in rows)
        assert report["status"] == PASS

    def test_resistance_target_outside_box(self, capsys):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert run_cli("resistance", "--n", "1", "--y", "3,0", "--out-dir", tmpdir) == 1
        assert "Configuration error" in capsys.readouterr().out

    def test_graph_written(self):
        """The edge list reads back to the same graph."""
        with tempfile.TemporaryDirectory() as tmpdir:
            code = run_cli("graph", "--graph", "cycle", "--size", "5", "--out-dir", tmpdir)
            graph = read_edge_list(f"{tmpdir}/graph.txt")
            assert Path(f"{tmpdir}/graph.txt.labels.json").exists()
        assert code == 0
        assert graph.n_vertices == 5
        assert graph.n_edges == 5

    def test_vrjp_first_jump(self):
        """On two vertices the first jump is forced; the law file records it."""
        with tempfile.TemporaryDirectory() as tmpdir:
            code = run_cli(
                "vrjp", "--graph", "two_vertex", "--k", "1", "--runs", "200", "--out-dir", tmpdir, "--threads", "1"
            )
            law = json.loads(Path(f"{tmpdir}/vrjp_law.json").read_text())
            assert Path(f"{tmpdir}/vrjp_trajectory.csv").exists()
        assert code == 0
        assert law["law"]["1"][0] == 1.0

    def test_bad_config_file(self, capsys):
        with tempfile.TemporaryDirectory() as tmpdir:
            target = Path(tmpdir) / "bad.yaml"
            target.write_text("sampler:\n  n_chain: 2\n")
            assert run_cli("verify", "taylor", "-c", str(target), "--out-dir", tmpdir) == 1
        assert "sampler.n_chain" in capsys.readouterr().out


class TestDecayHelpers:
    """Test target validation and the slope fit."""

    def test_targets_deduplicated(self):
        assert decay_targets(3, [[1, 0], [2, 0], [1, 0]]) == [(1, 0), (2, 0)]

    @pytest.mark.parametrize("ys", [[[0, 0]], [[4, 0]], [[1, -5]]])
    def test_invalid_targets(self, ys):
        with pytest.raises(ConfigError):
            decay_targets(3, ys)

    def test_slope_needs_three_rows(self):
        assert fit_decay_slope([make_row(1, 0.9), make_row(2, 0.8)], -0.001) is None
        assert fit_decay_slope([make_row(2, 0.9), make_row(2, 0.8), make_row(2, 0.7)], -0.001) is None

    def test_slope_recovers_power_law(self):
        """Estimates c|y|^{-a} give slope -a with a tight interval."""
        rows = [make_row(n, 0.9 * n**-0.1) for n in (1, 2, 4, 8)]
        fit = fit_decay_slope(rows, -1.0 / 2048.0)
        assert math.isclose(fit.slope, -0.1, abs_tol=1e-10)
        assert fit.ci_low <= fit.slope <= fit.ci_high
        assert fit.n_points == 4

    def test_trend_note(self):
        resolved = trend_note([make_row(1, 0.9), make_row(4, 0.8)])
        assert "decreases" in resolved
        unresolved = trend_note([make_row(1, 0.9, 0.1), make_row(4, 0.89, 0.1)])
        assert "not resolved" in unresolved
        assert trend_note([make_row(1, 0.9)]) is None
