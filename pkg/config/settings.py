"""
Configuration settings for the metaphor-hierarchy corpus pipeline.

Centralizes path constants, reference-data locations, default analysis
parameters (coverage thresholds, hierarchy rules, k-means ensemble), and
logging setup used across the project.
"""

import logging
from pathlib import Path

# ---------------------------------------------------------------------------
# Path constants
# ---------------------------------------------------------------------------

PROJECT_ROOT: Path = Path(__file__).resolve().parent.parent

DATA_DIR: Path = PROJECT_ROOT / "data"
LEXICON_DIR: Path = DATA_DIR / "lexicon"
PLANS_DIR: Path = LEXICON_DIR / "plans"
SCRIPTS_DIR: Path = PROJECT_ROOT / "scripts"
WORKSPACE_DIR: Path = PROJECT_ROOT / "workspace"
LOGS_DIR: Path = PROJECT_ROOT / "logs"

LOG_FILE: Path = LOGS_DIR / "pipeline.log"

# ---------------------------------------------------------------------------
# Reference data shipped with the pipeline
# ---------------------------------------------------------------------------

VERB_LEXICON_FILE: Path = LEXICON_DIR / "verbs.json"
NOUN_LIST_FILE: Path = LEXICON_DIR / "nouns.txt"
CLOSED_CLASS_FILE: Path = LEXICON_DIR / "closed_class.txt"
TAG_MAP_FILE: Path = LEXICON_DIR / "treetagger_map.tsv"
STUDY_PLAN_FILE: Path = PLANS_DIR / "study_up.yaml"

# ---------------------------------------------------------------------------
# Corpus settings
# ---------------------------------------------------------------------------

CORPUS_SETTINGS: dict = {
    "encoding": "utf-8",        # canonical encoding for raw documents
    "dedup_key_length": 50,     # articles keyed on their first 50 characters
    "read_workers": 4,          # threads used to read/normalize documents
    "raw_suffixes": [".txt", ".html", ".htm"],
}

# ---------------------------------------------------------------------------
# Analysis settings
# ---------------------------------------------------------------------------

COVERAGE_THRESHOLDS: dict = {
    "theta_cov": 0.60,
    "theta_asym": 0.20,         # absolute gap between the two directions
    "theta_outlier": 0.20,      # mean overlap below this -> outlier
    "theta_sibling_min": 0.25,  # floor for the symmetric sibling band
}

HIERARCHY_SETTINGS: dict = {
    "theta_singleton": 0.50,    # minimum ensemble singleton frequency for a head
    "min_subordinates": 3,
    "advisory_min_share": 0.02,  # named groups shown as secondary organizers
}

KMEANS_SETTINGS: dict = {
    "max_iters": 100,
    "jitter_scale": 1e-6,       # centroid jitter when k exceeds the point count
}

ENSEMBLE_SETTINGS: dict = {
    "k_min": 2,
    "k_max": 10,
    "runs_per_k": 100,          # 9 group counts x 100 runs = 900
    "workers": 1,
}

DISTRIBUTION_SETTINGS: dict = {
    "top_n": 10,
    "pareto_fraction": 0.2,
    "normalize_vectors": False,
}

SYNTH_SETTINGS: dict = {
    "sentences_per_article": 20,
    "noise_rate": 0.25,         # distractor sentences per planted sentence when noise is on
}

OUTPUT_SETTINGS: dict = {
    "float_format": "%.4f",
    "decimals": 4,
    "formats": ["report", "tables", "graph"],
}

# ---------------------------------------------------------------------------
# Logging helper
# ---------------------------------------------------------------------------


def setup_logging(level: int = logging.INFO, log_file: Path = LOG_FILE) -> None:
    """Configure Python logging to write to both *log_file* and the console
    at *level*."""

    log_file.parent.mkdir(parents=True, exist_ok=True)

    logger = logging.getLogger()
    logger.setLevel(level)

    # Avoid adding duplicate handlers if called more than once
    if logger.handlers:
        return

    formatter = logging.Formatter(
        "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    file_handler = logging.FileHandler(log_file, encoding="utf-8")
    file_handler.setLevel(level)
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)
