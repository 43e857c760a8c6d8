"""
Run configuration: defaults, YAML loading, CLI overrides and validation.

A config document looks like::

    seed: 7
    polarity: UP
    input_mode: raw-text
    thresholds: {theta_cov: 0.6, theta_asym: 0.2}
    hierarchy: {theta_singleton: 0.5, min_subordinates: 3}
    ensemble: {k_min: 2, k_max: 10, runs_per_k: 100}

Every section and key is optional; unknown keys are rejected.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import yaml

from config.settings import (
    CORPUS_SETTINGS,
    DISTRIBUTION_SETTINGS,
    OUTPUT_SETTINGS,
    VERB_LEXICON_FILE,
    WORKSPACE_DIR,
)
from scripts.clustering import EnsembleConfig
from scripts.coverage import CoverageThresholds
from scripts.errors import ConfigError
from scripts.hierarchy import HierarchyConfig

logger = logging.getLogger(__name__)

INPUT_MODES = ("raw-text", "annotated")
POLARITY_CHOICES = ("UP", "DOWN", "ALL")

_TOP_LEVEL_KEYS = {
    "seed", "polarity", "input_mode", "lexicon", "out", "formats", "encoding",
    "thresholds", "hierarchy", "ensemble", "vectors", "top_n", "plan", "noise",
}


@dataclass
class RunConfig:
    lexicon_path: Path = VERB_LEXICON_FILE
    input_mode: str = "raw-text"
    polarity: str = "UP"
    hierarchy: HierarchyConfig = field(default_factory=HierarchyConfig)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    out_dir: Path = WORKSPACE_DIR
    formats: list = field(default_factory=lambda: list(OUTPUT_SETTINGS["formats"]))
    encoding: str = CORPUS_SETTINGS["encoding"]
    normalize_vectors: bool = DISTRIBUTION_SETTINGS["normalize_vectors"]
    top_n: int = DISTRIBUTION_SETTINGS["top_n"]
    plan_path: Optional[Path] = None
    noise: Optional[bool] = None

    @property
    def thresholds(self) -> CoverageThresholds:
        return self.hierarchy.thresholds

    @property
    def seed(self) -> Optional[int]:
        return self.ensemble.master_seed

    # --- loading -----------------------------------------------------------

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        unknown = set(doc) - _TOP_LEVEL_KEYS
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown configuration key")

        def section(name: str, allowed: set) -> dict:
            data = doc.get(name) or {}
            if not isinstance(data, dict):
                raise ConfigError(name, "must be a mapping")
            extra = set(data) - allowed
            if extra:
                raise ConfigError(f"{name}.{sorted(extra)[0]}", "unknown configuration key")
            return data

        threshold_keys = {f.name for f in fields(CoverageThresholds)}
        thresholds = CoverageThresholds(**section("thresholds", threshold_keys))
        hierarchy_data = section("hierarchy", {"theta_singleton", "min_subordinates", "advisory_min_share"})
        hierarchy = HierarchyConfig(thresholds=thresholds, **hierarchy_data)
        ensemble_data = section("ensemble", {"k_min", "k_max", "runs_per_k", "workers", "max_iters"})
        ensemble = EnsembleConfig(master_seed=doc.get("seed"), **ensemble_data)
        vectors = section("vectors", {"normalize"})

        config = cls(hierarchy=hierarchy, ensemble=ensemble)
        if doc.get("lexicon"):
            config.lexicon_path = Path(doc["lexicon"])
        if doc.get("out"):
            config.out_dir = Path(doc["out"])
        if doc.get("plan"):
            config.plan_path = Path(doc["plan"])
        if "formats" in doc:
            formats = doc["formats"]
            config.formats = [formats] if isinstance(formats, str) else list(formats)
        for key, attr in (("input_mode", "input_mode"), ("encoding", "encoding"), ("top_n", "top_n"), ("noise", "noise")):
            if key in doc:
                setattr(config, attr, doc[key])
        if "polarity" in doc:
            config.polarity = str(doc["polarity"]).upper()
        if "normalize" in vectors:
            config.normalize_vectors = bool(vectors["normalize"])
        return config

    @classmethod
    def from_yaml(cls, path: Path) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError("config", f"config file {path} does not exist")
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = yaml.safe_load(fh) or {}
        except yaml.YAMLError as exc:
            raise ConfigError("config", f"{path} is not valid YAML: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config", f"{path} must hold a mapping")
        logger.info("Loaded run configuration from %s", path)
        return cls.from_dict(doc)

    # --- overrides ----------------------------------------------------------

    def with_overrides(self, **overrides) -> "RunConfig":
        """Apply CLI-style overrides; ``None`` values are ignored.

        Recognized keys: seed, k_min, k_max, runs_per_k, workers,
        theta_cov, theta_asym, theta_outlier, theta_sibling_min,
        theta_singleton, min_subordinates, polarity, input_mode, lexicon,
        out, formats, plan, noise, normalize_vectors.
        """
        given = {k: v for k, v in overrides.items() if v is not None}
        thresholds = replace(self.thresholds, **{
            k: float(given.pop(k)) for k in list(given)
            if k in {"theta_cov", "theta_asym", "theta_outlier", "theta_sibling_min"}
        })
        hierarchy = replace(self.hierarchy, thresholds=thresholds, **{
            k: given.pop(k) for k in list(given) if k in {"theta_singleton", "min_subordinates"}
        })
        ensemble = replace(self.ensemble, **{
            k: int(given.pop(k)) for k in list(given) if k in {"k_min", "k_max", "runs_per_k", "workers"}
        })
        if "seed" in given:
            ensemble = replace(ensemble, master_seed=int(given.pop("seed")))

        config = replace(self, hierarchy=hierarchy, ensemble=ensemble)
        renames = {"lexicon": "lexicon_path", "out": "out_dir", "plan": "plan_path"}
        for key, value in given.items():
            attr = renames.get(key, key)
            if not hasattr(config, attr):
                raise ConfigError(key, "unknown override")
            if attr in ("lexicon_path", "out_dir", "plan_path"):
                value = Path(value)
            if attr == "polarity":
                value = str(value).upper()
            setattr(config, attr, value)
        return config

    # --- validation ---------------------------------------------------------

    def validate(self, require_seed: bool = False) -> "RunConfig":
        """Raise :class:`ConfigError` naming the first invalid field."""
        self.hierarchy.validate()
        self.ensemble.validate(require_seed=require_seed)
        if self.input_mode not in INPUT_MODES:
            raise ConfigError("input_mode", f"must be one of {INPUT_MODES}, got {self.input_mode!r}")
        if self.polarity not in POLARITY_CHOICES:
            raise ConfigError("polarity", f"must be one of {POLARITY_CHOICES}, got {self.polarity!r}")
        bad = [f for f in self.formats if f not in OUTPUT_SETTINGS["formats"]]
        if bad or not self.formats:
            raise ConfigError("formats", f"must be a non-empty subset of {OUTPUT_SETTINGS['formats']}")
        if not isinstance(self.top_n, int) or self.top_n < 0:
            raise ConfigError("top_n", f"must be a non-negative integer, got {self.top_n!r}")
        if not Path(self.lexicon_path).exists():
            raise ConfigError("lexicon", f"lexicon file {self.lexicon_path} does not exist")
        return self

    # --- canonical form -----------------------------------------------------

    def to_dict(self) -> dict:
        """Canonical form embedded in artifacts.

        The output directory and worker count are left out: neither changes
        any result.
        """
        ensemble = self.ensemble.to_dict()
        return {
            "lexicon": Path(self.lexicon_path).name,
            "input_mode": self.input_mode,
            "polarity": self.polarity,
            "seed": ensemble.pop("master_seed"),
            "thresholds": self.thresholds.to_dict(),
            "hierarchy": {
                "theta_singleton": self.hierarchy.theta_singleton,
                "min_subordinates": self.hierarchy.min_subordinates,
                "advisory_min_share": self.hierarchy.advisory_min_share,
            },
            "ensemble": ensemble,
            "vectors": {"normalize": self.normalize_vectors},
            "encoding": self.encoding,
            "top_n": self.top_n,
        }


def config_hash(config: dict) -> str:
    """sha256 of the sorted-key JSON form of *config*."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
