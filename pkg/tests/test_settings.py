"""
Tests for config.settings -- path constants, analysis defaults, and logging.
"""

import sys
from pathlib import Path

import pytest

# Ensure the project root is importable
PROJECT_ROOT_PATH = str(Path(__file__).resolve().parent.parent)
if PROJECT_ROOT_PATH not in sys.path:
    sys.path.insert(0, PROJECT_ROOT_PATH)

from config.settings import (
    PROJECT_ROOT,
    DATA_DIR,
    LEXICON_DIR,
    SCRIPTS_DIR,
    WORKSPACE_DIR,
    LOGS_DIR,
    VERB_LEXICON_FILE,
    NOUN_LIST_FILE,
    CLOSED_CLASS_FILE,
    TAG_MAP_FILE,
    STUDY_PLAN_FILE,
    COVERAGE_THRESHOLDS,
    HIERARCHY_SETTINGS,
    ENSEMBLE_SETTINGS,
    OUTPUT_SETTINGS,
    setup_logging,
)


# ---------------------------------------------------------------------------
# Path constants
# ---------------------------------------------------------------------------

class TestProjectPaths:
    """Verify that the project root and subdirectory constants are correct."""

    def test_project_root_exists(self):
        assert PROJECT_ROOT.is_dir(), (
            f"PROJECT_ROOT does not exist or is not a directory: {PROJECT_ROOT}"
        )

    def test_subdirectories_defined(self):
        """Every directory constant should reside under PROJECT_ROOT."""
        for name, path in [
            ("DATA_DIR", DATA_DIR),
            ("LEXICON_DIR", LEXICON_DIR),
            ("SCRIPTS_DIR", SCRIPTS_DIR),
            ("WORKSPACE_DIR", WORKSPACE_DIR),
            ("LOGS_DIR", LOGS_DIR),
        ]:
            assert isinstance(path, Path), f"{name} is not a Path instance"
            assert str(path).startswith(str(PROJECT_ROOT)), (
                f"{name} ({path}) is not under PROJECT_ROOT ({PROJECT_ROOT})"
            )


# ---------------------------------------------------------------------------
# Reference data
# ---------------------------------------------------------------------------

class TestReferenceFiles:
    """The shipped lexicon, word lists, tag map and study plan exist."""

    @pytest.mark.parametrize("path", [
        VERB_LEXICON_FILE, NOUN_LIST_FILE, CLOSED_CLASS_FILE, TAG_MAP_FILE, STUDY_PLAN_FILE,
    ])
    def test_reference_file_exists(self, path):
        assert path.exists(), f"reference file not found: {path}"


# ---------------------------------------------------------------------------
# Analysis defaults
# ---------------------------------------------------------------------------

class TestAnalysisDefaults:
    def test_thresholds(self):
        assert COVERAGE_THRESHOLDS["theta_cov"] == 0.60
        assert COVERAGE_THRESHOLDS["theta_asym"] == 0.20
        assert COVERAGE_THRESHOLDS["theta_outlier"] == 0.20
        assert COVERAGE_THRESHOLDS["theta_cov"] > COVERAGE_THRESHOLDS["theta_sibling_min"]

    def test_hierarchy_defaults(self):
        assert HIERARCHY_SETTINGS["theta_singleton"] == 0.50
        assert HIERARCHY_SETTINGS["min_subordinates"] == 3

    def test_ensemble_defaults(self):
        runs = (ENSEMBLE_SETTINGS["k_max"] - ENSEMBLE_SETTINGS["k_min"] + 1) * ENSEMBLE_SETTINGS["runs_per_k"]
        assert runs == 900

    def test_output_formats(self):
        assert OUTPUT_SETTINGS["float_format"] == "%.4f"
        assert set(OUTPUT_SETTINGS["formats"]) == {"report", "tables", "graph"}


# ---------------------------------------------------------------------------
# Logging
# ---------------------------------------------------------------------------

class TestLogging:
    """Verify the setup_logging helper."""

    def test_setup_logging_creates_log_dir(self, tmp_path):
        log_file = tmp_path / "logs" / "pipeline.log"
        setup_logging(log_file=log_file)
        assert log_file.parent.is_dir()
