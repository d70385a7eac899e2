"""
Unit tests for configuration loading and validation
"""

import json
import tempfile
from pathlib import Path

import numpy as np
import pytest

import vrjp_lab.suites  # noqa: F401  (registers checks)
from vrjp_lab.framework import CheckRegistry
from vrjp_lab.framework.config import CheckConfig, ExecutorConfig, LabConfig, SamplerConfig
from vrjp_lab.framework.errors import ConfigError
from vrjp_lab.sampler.samples import sample_field

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


class TestLabConfig:
    """Test LabConfig construction."""

    def test_defaults(self):
        """Default sections and derived values."""
        config = LabConfig()
        assert config.graph.kind == "box"
        assert config.sampler.samples_per_chain == 5000
        assert not ExecutorConfig(threads=1).parallel
        assert ExecutorConfig(threads=4).parallel

    def test_dict_round_trip(self):
        """to_dict feeds back into from_dict with the same digest."""
        config = LabConfig.from_dict({"graph": {"kind": "triangle", "w": 2.0}, "sampler": {"seed": 5}})
        again = LabConfig.from_dict(config.to_dict())
        assert again.digest() == config.digest()
        assert again.graph.w == 2.0

    def test_digest_tracks_content(self):
        """Any field change moves the digest."""
        assert LabConfig().digest() == LabConfig().digest()
        assert LabConfig.from_dict({"deformation": {"s": 0.25}}).digest() != LabConfig().digest()

    def test_unknown_section(self):
        """Unknown top-level keys are reported by name."""
        with pytest.raises(ConfigError) as excinfo:
            LabConfig.from_dict({"samplr": {}})
        assert excinfo.value.field_path == "samplr"

    def test_unknown_field(self):
        """Unknown fields are reported with their path."""
        with pytest.raises(ConfigError) as excinfo:
            LabConfig.from_dict({"sampler": {"steps": 3}})
        assert excinfo.value.field_path == "sampler.steps"

    @pytest.mark.parametrize(
        "section,values,field_path",
        [
            ("sampler", {"thinning": 0}, "sampler.thinning"),
            ("sampler", {"step_size": -1.0}, "sampler.step_size"),
            ("sampler", {"target_acceptance": 1.0}, "sampler.target_acceptance"),
            ("deformation", {"s": 1.0}, "deformation.s"),
            ("deformation", {"ys": [[0, 0]]}, "deformation.ys"),
            ("graph", {"n": 0}, "graph.n"),
            ("vrjp", {"k": 0}, "vrjp.k"),
            ("executor", {"threads": 0}, "executor.threads"),
        ],
    )
    def test_invalid_values(self, section, values, field_path):
        """Out-of-range values name the offending field."""
        with pytest.raises(ConfigError) as excinfo:
            LabConfig.from_dict({section: values})
        assert excinfo.value.field_path == field_path

    def test_overrides(self):
        """--seed reaches the executor and the sampler; --threads is validated."""
        config = LabConfig().apply_overrides(seed=17, threads=2, out_dir="/tmp/out")
        assert config.executor.seed == 17
        assert config.sampler.seed == 17
        assert config.executor.out_dir == "/tmp/out"
        with pytest.raises(ConfigError):
            LabConfig().apply_overrides(threads=0)

    def test_string_checks(self):
        """A check may be given by name alone."""
        config = LabConfig.from_dict({"suites": [{"name": "taylor", "checks": ["taylor_grid"]}]})
        assert config.suites[0].checks[0].name == "taylor_grid"
        assert config.suites[0].checks[0].params == {}


class TestYamlLoading:
    """Test from_yaml on files."""

    @pytest.mark.parametrize("name", ["default.yaml", "quick.yaml", "verify_all.yaml", "decay_n4.yaml"])
    def test_shipped_configs_load(self, name):
        """Every shipped config is valid and names registered checks only."""
        config = LabConfig.from_yaml(CONFIG_DIR / name)
        registered = set(CheckRegistry.list_checks())
        for suite in config.suites:
            for check in suite.checks:
                assert check.get_class_name() in registered

    def test_yaml_error_has_line(self):
        """Syntax errors carry a line number."""
        with tempfile.TemporaryDirectory() as tmpdir:
            target = Path(tmpdir) / "broken.yaml"
            target.write_text("graph:\n  kind: box\n  n: [1,\n")
            with pytest.raises(ConfigError) as excinfo:
                LabConfig.from_yaml(target)
        assert excinfo.value.line is not None

    def test_report_is_accepted(self):
        """A report's embedded config block reloads to the same digest."""
        config = LabConfig.from_dict({"graph": {"kind": "cycle", "size": 5}})
        with tempfile.TemporaryDirectory() as tmpdir:
            target = Path(tmpdir) / "verify_report.json"
            target.write_text(json.dumps({"config": config.to_dict(), "verdicts": []}))
            assert LabConfig.from_yaml(target).digest() == config.digest()

    def test_executor_seed_drives_chains(self):
        """executor.seed set in YAML reaches the sampler and changes the samples."""
        texts = {
            "a": "graph:\n  kind: two_vertex\nsampler:\n  n_samples: 20\n  n_chains: 2\n  burn_in: 5\nexecutor:\n  seed: 11\n",
            "b": "graph:\n  kind: two_vertex\nsampler:\n  n_samples: 20\n  n_chains: 2\n  burn_in: 5\nexecutor:\n  seed: 12\n",
        }
        samples = {}
        with tempfile.TemporaryDirectory() as tmpdir:
            for name, text in texts.items():
                target = Path(tmpdir) / f"{name}.yaml"
                target.write_text(text)
                config = LabConfig.from_yaml(target)
                assert config.sampler.seed == config.executor.seed
                samples[name] = sample_field(config.graph.build(), config.sampler).values
        assert not np.array_equal(samples["a"], samples["b"])

    def test_explicit_sampler_seed_kept(self):
        """A sampler seed given in config is not replaced."""
        config = LabConfig.from_dict({"sampler": {"seed": 5}, "executor": {"seed": 9}})
        assert config.sampler.seed == 5
        assert LabConfig().sampler.seed == LabConfig().executor.seed

    def test_graph_build(self):
        """GraphConfig builds the configured instance."""
        config = LabConfig.from_dict({"graph": {"kind": "path", "size": 4}})
        assert config.graph.build().n_vertices == 4


class TestCheckNames:
    """Test snake_case to class-name conversion."""

    @pytest.mark.parametrize(
        "name,class_name",
        [
            ("matrix_tree_oracle", "MatrixTreeOracle"),
            ("lemma1_bound", "Lemma1Bound"),
            ("rn_ratio_consistency", "RnRatioConsistency"),
        ],
    )
    def test_class_name(self, name, class_name):
        assert CheckConfig(name=name).get_class_name() == class_name

    def test_sampler_config_direct(self):
        """Sections validate when built directly too."""
        with pytest.raises(ConfigError):
            SamplerConfig(n_samples=2, n_chains=4)
