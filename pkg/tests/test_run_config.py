"""
Tests for scripts.run_config -- YAML loading, overrides, validation and the
canonical form embedded in artifacts.
"""

import sys
from pathlib import Path

import pytest

PROJECT_ROOT = str(Path(__file__).resolve().parent.parent)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from scripts.errors import ConfigError
from scripts.run_config import RunConfig, config_hash


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

class TestLoading:
    def test_defaults(self):
        config = RunConfig().validate()
        assert config.polarity == "UP"
        assert config.input_mode == "raw-text"
        assert config.thresholds.theta_cov == 0.60
        assert config.ensemble.runs_total == 900
        assert config.seed is None

    def test_yaml_sections(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(
            "seed: 7\n"
            "polarity: down\n"
            "thresholds: {theta_cov: 0.7, theta_asym: 0.25}\n"
            "hierarchy: {min_subordinates: 4}\n"
            "ensemble: {k_min: 3, k_max: 6, runs_per_k: 10}\n"
            "vectors: {normalize: true}\n"
            "formats: [report, tables]\n",
            encoding="utf-8",
        )
        config = RunConfig.from_yaml(path).validate(require_seed=True)
        assert config.seed == 7
        assert config.polarity == "DOWN"
        assert config.thresholds.theta_cov == 0.7
        assert config.hierarchy.min_subordinates == 4
        assert config.ensemble.runs_total == 40
        assert config.normalize_vectors is True
        assert config.formats == ["report", "tables"]

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError) as exc_info:
            RunConfig.from_dict({"sed": 7})
        assert exc_info.value.field == "sed"

    def test_unknown_section_key_rejected(self):
        with pytest.raises(ConfigError) as exc_info:
            RunConfig.from_dict({"ensemble": {"k_mx": 4}})
        assert exc_info.value.field == "ensemble.k_mx"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig.from_yaml(tmp_path / "absent.yaml")

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("seed: [unclosed\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            RunConfig.from_yaml(path)


# ---------------------------------------------------------------------------
# Overrides & validation
# ---------------------------------------------------------------------------

class TestOverrides:
    def test_cli_overrides_win(self):
        base = RunConfig.from_dict({"seed": 1, "thresholds": {"theta_cov": 0.7}})
        config = base.with_overrides(seed=9, theta_cov=0.65, k_min=2, k_max=3, out="w", polarity="all")
        assert config.seed == 9
        assert config.thresholds.theta_cov == 0.65
        assert config.ensemble.k_max == 3
        assert config.out_dir == Path("w")
        assert config.polarity == "ALL"
        # the base object is untouched
        assert base.seed == 1 and base.thresholds.theta_cov == 0.7

    def test_none_values_are_ignored(self):
        config = RunConfig().with_overrides(seed=None, theta_cov=None)
        assert config.seed is None
        assert config.thresholds.theta_cov == 0.60

    def test_unknown_override(self):
        with pytest.raises(ConfigError):
            RunConfig().with_overrides(colour="blue")

    @pytest.mark.parametrize("overrides,field", [
        ({"theta_cov": 1.5}, "theta_cov"),
        ({"theta_singleton": 0.0}, "theta_singleton"),
        ({"k_min": 6, "k_max": 2}, "k_range"),
        ({"polarity": "sideways"}, "polarity"),
        ({"input_mode": "xml"}, "input_mode"),
        ({"formats": ["pdf"]}, "formats"),
        ({"lexicon": "/no/such/lexicon.json"}, "lexicon"),
    ])
    def test_validation_names_field(self, overrides, field):
        with pytest.raises(ConfigError) as exc_info:
            RunConfig().with_overrides(**overrides).validate()
        assert exc_info.value.field == field

    def test_seed_required_on_request(self):
        RunConfig().validate()
        with pytest.raises(ConfigError) as exc_info:
            RunConfig().validate(require_seed=True)
        assert exc_info.value.field == "seed"


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------

class TestCanonicalForm:
    def test_output_location_and_workers_do_not_matter(self):
        a = RunConfig().with_overrides(seed=3, out="one", workers=1)
        b = RunConfig().with_overrides(seed=3, out="two", workers=8)
        assert a.to_dict() == b.to_dict()
        assert config_hash(a.to_dict()) == config_hash(b.to_dict())

    def test_hash_tracks_analysis_settings(self):
        a = RunConfig().with_overrides(seed=3)
        b = RunConfig().with_overrides(seed=4)
        assert config_hash(a.to_dict()) != config_hash(b.to_dict())
