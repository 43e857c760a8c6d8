"""
Seeded k-means over verb vectors and the signature-counting ensemble.

A single :func:`kmeans` run is plain Lloyd iteration with Forgy
initialization.  :func:`ensemble` repeats it over a range of group counts
with per-run seeds derived from a master seed, canonicalizes each partition
into a label-free signature and tallies how often each signature, each
singleton verb and each named group appears.
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from config.settings import ENSEMBLE_SETTINGS, KMEANS_SETTINGS
from scripts.distributions import VerbVector
from scripts.errors import ConfigError, DataError, UndefinedMeasureError, UnknownVerbError

logger = logging.getLogger(__name__)

REST_LABEL = "rest*"
ALL_IN_ONE_LABEL = "all-verbs-as-one-group"


# ---------------------------------------------------------------------------
# Dataclasses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Non-empty verb groups of one run plus the number of empty centroids."""

    groups: tuple
    k_requested: int
    empty_groups: int


@dataclass
class KMeansResult:
    partition: Partition
    labels: np.ndarray
    centroids: np.ndarray
    wcss_history: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False

    @property
    def wcss(self) -> float:
        return self.wcss_history[-1] if self.wcss_history else 0.0


@dataclass
class EnsembleConfig:
    k_min: int = ENSEMBLE_SETTINGS["k_min"]
    k_max: int = ENSEMBLE_SETTINGS["k_max"]
    runs_per_k: int = ENSEMBLE_SETTINGS["runs_per_k"]
    master_seed: Optional[int] = None
    workers: int = ENSEMBLE_SETTINGS["workers"]
    max_iters: int = KMEANS_SETTINGS["max_iters"]

    def validate(self, require_seed: bool = True) -> "EnsembleConfig":
        if self.k_min < 1:
            raise ConfigError("k_min", f"must be >= 1, got {self.k_min}")
        if self.k_min > self.k_max:
            raise ConfigError("k_range", f"k_min ({self.k_min}) must not exceed k_max ({self.k_max})")
        if self.runs_per_k < 1:
            raise ConfigError("runs_per_k", f"must be >= 1, got {self.runs_per_k}")
        if self.workers < 1:
            raise ConfigError("workers", f"must be >= 1, got {self.workers}")
        if self.max_iters < 1:
            raise ConfigError("max_iters", f"must be >= 1, got {self.max_iters}")
        if self.master_seed is None:
            if require_seed:
                raise ConfigError("seed", "a master seed is required (use --seed or the config file)")
        elif not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ConfigError("seed", f"must be a non-negative integer, got {self.master_seed}")
        return self

    @property
    def runs_total(self) -> int:
        return (self.k_max - self.k_min + 1) * self.runs_per_k

    def to_dict(self) -> dict:
        return {
            "k_min": self.k_min,
            "k_max": self.k_max,
            "runs_per_k": self.runs_per_k,
            "master_seed": self.master_seed,
            "max_iters": self.max_iters,
        }


# ---------------------------------------------------------------------------
# k-means
# ---------------------------------------------------------------------------


def _stack(vectors: Sequence[VerbVector]) -> np.ndarray:
    if not vectors:
        raise DataError("k-means needs at least one vector")
    dims = {len(v.components) for v in vectors}
    if len(dims) != 1:
        raise DataError(f"vector dimensions differ: {sorted(dims)}")
    return np.vstack([np.asarray(v.components, dtype=float) for v in vectors])


def _initial_centroids(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Forgy initialization; surplus centroids sit at the jittered data mean."""
    n, dim = points.shape
    if k <= n:
        return points[rng.choice(n, size=k, replace=False)].copy()
    scale = KMEANS_SETTINGS["jitter_scale"] * max(1.0, float(points.std()))
    surplus = points.mean(axis=0) + rng.normal(scale=scale, size=(k - n, dim))
    return np.vstack([points[rng.permutation(n)], surplus])


def kmeans_fit(vectors: Sequence[VerbVector], k: int, seed: int,
               max_iters: int = KMEANS_SETTINGS["max_iters"]) -> KMeansResult:
    """Run Lloyd's algorithm and keep its per-iteration WCSS.

    Each recorded WCSS is that of the fresh assignment against the centroids
    it was made with.  Ties go to the lowest centroid index and centroids
    that lose all members stay where they are.
    """
    if k < 1:
        raise ConfigError("k", f"must be >= 1, got {k}")
    points = _stack(vectors)
    n = points.shape[0]
    rng = np.random.default_rng(seed)
    centroids = _initial_centroids(points, k, rng)

    labels: Optional[np.ndarray] = None
    history: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        dist2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = dist2.argmin(axis=1)
        history.append(float(dist2[np.arange(n), new_labels].sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels
        for c in range(k):
            members = points[labels == c]
            if len(members):
                centroids[c] = members.mean(axis=0)

    names = [v.verb for v in vectors]
    groups = []
    for c in range(k):
        members = frozenset(names[i] for i in np.flatnonzero(labels == c))
        if members:
            groups.append(members)
    partition = Partition(groups=tuple(groups), k_requested=k, empty_groups=k - len(groups))
    return KMeansResult(partition=partition, labels=labels, centroids=centroids,
                        wcss_history=history, iterations=iterations, converged=converged)


def kmeans(vectors: Sequence[VerbVector], k: int, seed: int,
           max_iters: int = KMEANS_SETTINGS["max_iters"]) -> Partition:
    """Partition *vectors* into at most *k* groups; depends only on its arguments."""
    return kmeans_fit(vectors, k, seed, max_iters).partition


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------


def canonical_signature(partition: Partition) -> tuple:
    """Groups as sorted tuples, ordered by size (largest first) then first lemma."""
    groups = [tuple(sorted(g)) for g in partition.groups if g]
    return tuple(sorted(groups, key=lambda g: (-len(g), g[0])))


def signature_key(signature: tuple) -> str:
    """Stable string form, e.g. ``"climb,gain,jump|rise"``."""
    return "|".join(",".join(group) for group in signature)


def parse_signature_key(key: str) -> tuple:
    return tuple(tuple(group.split(",")) for group in key.split("|")) if key else ()


def display_signature(signature: tuple) -> str:
    """Human form: named groups by ascending size, the largest group as ``rest*``.

    ``("climb", "gain", "jump"), ("rise",)`` renders as ``rise, rest*``;
    a one-group signature renders as ``all-verbs-as-one-group``.
    """
    if len(signature) <= 1:
        return ALL_IN_ONE_LABEL
    named = sorted(signature[1:], key=lambda g: (len(g), g[0]))
    parts = [g[0] if len(g) == 1 else "[" + ", ".join(g) + "]" for g in named]
    return ", ".join(parts + [REST_LABEL])


# ---------------------------------------------------------------------------
# Ensemble
# ---------------------------------------------------------------------------


@dataclass
class EnsembleSummary:
    """Signature, singleton and named-group tallies over all runs."""

    verbs: list = field(default_factory=list)
    runs_total: int = 0
    signature_counts: Counter = field(default_factory=Counter)
    singleton_counts: Counter = field(default_factory=Counter)
    group_counts: Counter = field(default_factory=Counter)
    config: dict = field(default_factory=dict)

    def add(self, partition: Partition) -> None:
        signature = canonical_signature(partition)
        self.runs_total += 1
        self.signature_counts[signature_key(signature)] += 1
        for group in signature:
            if len(group) == 1:
                self.singleton_counts[group[0]] += 1
        if len(signature) > 1:
            for group in signature[1:]:
                self.group_counts[",".join(group)] += 1

    def merge(self, other: "EnsembleSummary") -> "EnsembleSummary":
        merged = EnsembleSummary(verbs=list(self.verbs or other.verbs), config=dict(self.config))
        merged.runs_total = self.runs_total + other.runs_total
        for name in ("signature_counts", "singleton_counts", "group_counts"):
            getattr(merged, name).update(getattr(self, name))
            getattr(merged, name).update(getattr(other, name))
        return merged

    def to_dict(self) -> dict:
        return {
            "verbs": list(self.verbs),
            "runs_total": self.runs_total,
            "signature_counts": dict(sorted(self.signature_counts.items())),
            "singleton_counts": {v: self.singleton_counts.get(v, 0) for v in sorted(self.verbs)},
            "group_counts": dict(sorted(self.group_counts.items())),
            "config": dict(self.config),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EnsembleSummary":
        return cls(
            verbs=list(data.get("verbs", [])),
            runs_total=int(data.get("runs_total", 0)),
            signature_counts=Counter(data.get("signature_counts", {})),
            singleton_counts=Counter({v: n for v, n in data.get("singleton_counts", {}).items() if n}),
            group_counts=Counter(data.get("group_counts", {})),
            config=dict(data.get("config", {})),
        )


def derive_seed(master_seed: int, k: int, run: int) -> int:
    """Per-run seed from ``(master_seed, k, run)``; independent of run order."""
    state = np.random.SeedSequence(master_seed, spawn_key=(k, run)).generate_state(1)
    return int(state[0])


def ensemble(vectors: Sequence[VerbVector], config: EnsembleConfig) -> EnsembleSummary:
    """Run ``runs_per_k`` seeded k-means runs for every k in the range.

    With ``workers > 1`` runs execute on a thread pool; results are tallied
    in (k, run) order so the summary matches a sequential pass.
    """
    config.validate()
    tasks = [(k, run) for k in range(config.k_min, config.k_max + 1) for run in range(config.runs_per_k)]
    summary = EnsembleSummary(verbs=[v.verb for v in vectors], config=config.to_dict())

    def _run(task):
        k, run = task
        return kmeans(vectors, k, derive_seed(config.master_seed, k, run), config.max_iters)

    logger.info(
        "Running k-means ensemble: k=%d..%d, %d runs per k, %d runs total, %d worker(s).",
        config.k_min, config.k_max, config.runs_per_k, len(tasks), config.workers,
    )
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            partitions = list(pool.map(_run, tasks))
    else:
        partitions = [_run(task) for task in tasks]

    for partition in partitions:
        summary.add(partition)
    logger.info(
        "Ensemble done: %d runs, %d distinct signatures.",
        summary.runs_total, len(summary.signature_counts),
    )
    return summary


def singleton_frequency(summary: EnsembleSummary, verb: str) -> float:
    """Fraction of runs in which *verb* forms a group on its own."""
    if verb not in summary.verbs:
        raise UnknownVerbError(verb)
    if summary.runs_total <= 0:
        raise UndefinedMeasureError("singleton frequency is undefined for an empty ensemble")
    return summary.singleton_counts.get(verb, 0) / summary.runs_total


def top_signatures(summary: EnsembleSummary, n: int) -> list[tuple[tuple, float, int]]:
    """The *n* most frequent signatures as ``(signature, percent, count)``."""
    if n <= 0 or summary.runs_total <= 0:
        return []
    ranked = sorted(summary.signature_counts.items(), key=lambda item: (-item[1], item[0]))
    return [
        (parse_signature_key(key), 100.0 * count / summary.runs_total, count)
        for key, count in ranked[:n]
    ]
