"""
Metaphor-hierarchy inference from coverage relations and ensemble statistics.

Every verb ends up in exactly one category: superordinate head, member of a
head's subordinate set, member of a sibling group, outlier, or unassigned.
A head needs both kinds of evidence: at least ``min_subordinates``
pairwise-subordinate verbs and a singleton frequency of at least
``theta_singleton`` in the clustering ensemble.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from config.settings import HIERARCHY_SETTINGS
from scripts.clustering import EnsembleSummary, singleton_frequency
from scripts.coverage import (
    SIBLINGS,
    CoverageMatrix,
    CoverageThresholds,
    classify_all,
    mean_overlap,
    subordinates_of,
    subset_coverage,
    within_subset_coverage,
)
from scripts.errors import ConfigError, DataError, InvariantError

logger = logging.getLogger(__name__)

SUPER = "SUPER"
SUBORDINATE = "SUBORDINATE"
SIBLING = "SIBLING"
OUTLIER = "OUTLIER"
UNASSIGNED = "UNASSIGNED"


@dataclass(frozen=True)
class HierarchyConfig:
    thresholds: CoverageThresholds = field(default_factory=CoverageThresholds)
    theta_singleton: float = HIERARCHY_SETTINGS["theta_singleton"]
    min_subordinates: int = HIERARCHY_SETTINGS["min_subordinates"]
    advisory_min_share: float = HIERARCHY_SETTINGS["advisory_min_share"]

    def validate(self) -> "HierarchyConfig":
        self.thresholds.validate()
        if not 0.0 < self.theta_singleton <= 1.0:
            raise ConfigError("theta_singleton", f"must lie in (0, 1], got {self.theta_singleton}")
        if self.min_subordinates < 1:
            raise ConfigError("min_subordinates", f"must be >= 1, got {self.min_subordinates}")
        if not 0.0 <= self.advisory_min_share <= 1.0:
            raise ConfigError("advisory_min_share", f"must lie in [0, 1], got {self.advisory_min_share}")
        return self

    def to_dict(self) -> dict:
        return {
            **self.thresholds.to_dict(),
            "theta_singleton": self.theta_singleton,
            "min_subordinates": self.min_subordinates,
            "advisory_min_share": self.advisory_min_share,
        }


@dataclass
class HierarchyReport:
    verbs: list
    superordinates: list = field(default_factory=list)
    sibling_groups: list = field(default_factory=list)
    outliers: list = field(default_factory=list)
    unassigned: list = field(default_factory=list)
    advisory_groups: list = field(default_factory=list)
    relations: list = field(default_factory=list)
    singleton_frequencies: dict = field(default_factory=dict)
    mean_overlaps: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)

    def roles(self) -> dict:
        """Map every verb to SUPER, SUBORDINATE, SIBLING, OUTLIER or UNASSIGNED."""
        roles = {}
        for row in self.superordinates:
            roles[row["verb"]] = SUPER
            for sub in row["subordinates"]:
                roles[sub] = SUBORDINATE
        for group in self.sibling_groups:
            for verb in group["members"]:
                roles[verb] = SIBLING
        for row in self.outliers:
            roles[row["verb"]] = OUTLIER
        for verb in self.unassigned:
            roles[verb] = UNASSIGNED
        return {verb: roles[verb] for verb in sorted(roles)}

    def to_dict(self) -> dict:
        return {
            "verbs": list(self.verbs),
            "superordinates": self.superordinates,
            "sibling_groups": self.sibling_groups,
            "outliers": self.outliers,
            "unassigned": list(self.unassigned),
            "advisory_groups": self.advisory_groups,
            "relations": self.relations,
            "singleton_frequencies": dict(sorted(self.singleton_frequencies.items())),
            "mean_overlaps": dict(sorted(self.mean_overlaps.items())),
            "thresholds": dict(self.thresholds),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HierarchyReport":
        return cls(**{name: data[name] for name in cls.__dataclass_fields__ if name in data})


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _pair_mean(cm: CoverageMatrix, a: str, b: str) -> float:
    return (cm.cov(a, b) + cm.cov(b, a)) / 2


def _grow_sibling_group(cm: CoverageMatrix, seed: tuple, pool: list, siblings: set) -> list:
    """Extend *seed* with verbs from *pool* that are siblings of every member."""
    group = list(seed)
    while True:
        fits = [
            v for v in pool
            if v not in group and all(frozenset((v, m)) in siblings for m in group)
        ]
        if not fits:
            return sorted(group)
        best = min(fits, key=lambda v: (-sum(_pair_mean(cm, v, m) for m in group) / len(group), v))
        group.append(best)


def _advisory(summary: EnsembleSummary, min_share: float) -> list:
    if summary.runs_total <= 0:
        return []
    rows = []
    for key, count in summary.group_counts.items():
        members = key.split(",")
        share = count / summary.runs_total
        if len(members) >= 2 and share >= min_share:
            rows.append({"group": members, "count": count, "share": share})
    return sorted(rows, key=lambda r: (-r["count"], r["group"]))


# ---------------------------------------------------------------------------
# Inference
# ---------------------------------------------------------------------------


def infer(cm: CoverageMatrix, summary: EnsembleSummary,
          config: Optional[HierarchyConfig] = None) -> HierarchyReport:
    """Assign every verb to exactly one hierarchy category.

    Outliers are taken first; heads are then processed by descending
    singleton frequency (ties by lemma), each claiming its not-yet-claimed
    subordinates; sibling groups are grown greedily from the strongest
    remaining sibling pair; whatever is left is unassigned.
    """
    config = (config or HierarchyConfig()).validate()
    t = config.thresholds
    verbs = list(cm.verbs)
    if sorted(verbs) != sorted(summary.verbs):
        raise DataError(
            "coverage matrix and ensemble summary cover different verbs: "
            f"{sorted(set(verbs) ^ set(summary.verbs))}"
        )

    relations = classify_all(cm, t)
    overlaps = {v: mean_overlap(cm, v) for v in verbs} if len(verbs) >= 2 else {}
    freqs = {
        v: singleton_frequency(summary, v) if summary.runs_total else 0.0
        for v in verbs
    }

    logger.info("Step 1 - outliers (mean overlap < %.2f)", t.theta_outlier)
    outliers = sorted(v for v, value in overlaps.items() if value < t.theta_outlier)
    claimed = set(outliers)

    logger.info(
        "Step 2 - superordinates (>= %d subordinates, singleton frequency >= %.2f)",
        config.min_subordinates, config.theta_singleton,
    )
    candidates = sorted(
        (v for v in verbs if v not in claimed and freqs[v] >= config.theta_singleton),
        key=lambda v: (-freqs[v], v),
    )
    superordinates = []
    for head in candidates:
        if head in claimed:
            continue
        members = sorted(s for s in subordinates_of(relations, head) if s not in claimed)
        if len(members) < config.min_subordinates:
            continue
        down, up = subset_coverage(cm, head, members)
        others = [v for v in verbs if v != head and v not in members and v not in outliers]
        superordinates.append({
            "verb": head,
            "subordinates": members,
            "singleton_frequency": freqs[head],
            "mean_coverage": down,
            "mean_reverse_coverage": up,
            "within_coverage": within_subset_coverage(cm, members) if len(members) >= 2 else None,
            "other_pairs": [
                {"verb": v, "coverage_by_head": cm.cov(head, v), "coverage_of_head": cm.cov(v, head)}
                for v in others
            ],
        })
        claimed.update(members)
        claimed.add(head)

    logger.info("Step 3 - sibling groups")
    remaining = sorted(v for v in verbs if v not in claimed)
    siblings = {
        frozenset((r.a, r.b)) for r in relations
        if r.relation == SIBLINGS and r.a in remaining and r.b in remaining
    }
    seeds = sorted(
        (tuple(sorted(pair)) for pair in siblings),
        key=lambda p: (-_pair_mean(cm, p[0], p[1]), p),
    )
    sibling_groups = []
    for a, b in seeds:
        if a in claimed or b in claimed:
            continue
        pool = [v for v in remaining if v not in claimed]
        members = _grow_sibling_group(cm, (a, b), pool, siblings)
        values = [cm.cov(x, y) for x in members for y in members if x != y]
        sibling_groups.append({
            "members": members,
            "min_coverage": min(values),
            "max_coverage": max(values),
            "mean_coverage": within_subset_coverage(cm, members),
        })
        claimed.update(members)

    unassigned = sorted(v for v in verbs if v not in claimed)
    report = HierarchyReport(
        verbs=verbs,
        superordinates=superordinates,
        sibling_groups=sibling_groups,
        outliers=[{"verb": v, "mean_overlap": overlaps[v]} for v in outliers],
        unassigned=unassigned,
        advisory_groups=_advisory(summary, config.advisory_min_share),
        relations=[r.to_dict() for r in relations],
        singleton_frequencies=freqs,
        mean_overlaps=overlaps,
        thresholds=config.to_dict(),
    )
    placed = (
        [row["verb"] for row in superordinates]
        + [s for row in superordinates for s in row["subordinates"]]
        + [v for group in sibling_groups for v in group["members"]]
        + outliers + unassigned
    )
    if sorted(placed) != sorted(verbs):
        raise InvariantError(f"hierarchy categories do not partition the verbs: {sorted(placed)}")
    logger.info(
        "Hierarchy: %d superordinate(s), %d sibling group(s), %d outlier(s), %d unassigned.",
        len(superordinates), len(sibling_groups), len(outliers), len(unassigned),
    )
    return report


# ---------------------------------------------------------------------------
# Graph export
# ---------------------------------------------------------------------------


def hierarchy_graph(report: HierarchyReport) -> nx.DiGraph:
    """Head -> subordinate edges, sibling cliques, outliers as isolated nodes."""
    graph = nx.DiGraph()
    for verb, role in report.roles().items():
        graph.add_node(verb, role=role,
                       singleton_frequency=float(report.singleton_frequencies.get(verb, 0.0)))
    for row in report.superordinates:
        for sub in row["subordinates"]:
            graph.add_edge(row["verb"], sub, relation="subordinate", undirected=False)
    for group in report.sibling_groups:
        members = group["members"]
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                graph.add_edge(a, b, relation="sibling", undirected=True)
    return graph
