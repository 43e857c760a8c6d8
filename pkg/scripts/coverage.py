"""
Directed argument-type coverage, cosine similarity and pair classification.

``cover[A][B]`` is the fraction of B's unique argument types that also occur
among A's ("A covers this much of B").  Frequencies enter only through the
cosine.  Pairs are classified as subordinate (either direction), siblings or
unrelated from their two coverage values.
"""

import logging
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Iterable, Optional

import networkx as nx
import numpy as np

from config.settings import COVERAGE_THRESHOLDS
from scripts.distributions import DistributionMatrix, to_vectors
from scripts.errors import ConfigError, UndefinedMeasureError, UnknownVerbError

logger = logging.getLogger(__name__)

B_SUBORDINATE_TO_A = "B_SUBORDINATE_TO_A"
A_SUBORDINATE_TO_B = "A_SUBORDINATE_TO_B"
SIBLINGS = "SIBLINGS"
UNRELATED = "UNRELATED"

# absorbs binary rounding in gaps such as 0.68 - 0.48
_GAP_EPSILON = 1e-12


# ---------------------------------------------------------------------------
# Dataclasses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverageThresholds:
    theta_cov: float = COVERAGE_THRESHOLDS["theta_cov"]
    theta_asym: float = COVERAGE_THRESHOLDS["theta_asym"]
    theta_outlier: float = COVERAGE_THRESHOLDS["theta_outlier"]
    theta_sibling_min: float = COVERAGE_THRESHOLDS["theta_sibling_min"]

    def validate(self) -> "CoverageThresholds":
        for name, value in asdict(self).items():
            if not 0.0 < value < 1.0:
                raise ConfigError(name, f"must lie in (0, 1), got {value}")
        if not self.theta_cov > self.theta_sibling_min:
            raise ConfigError(
                "theta_cov",
                f"must exceed theta_sibling_min ({self.theta_cov} <= {self.theta_sibling_min})",
            )
        return self

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PairRelation:
    a: str
    b: str
    relation: str
    cov_ab: float
    cov_ba: float
    cosine: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class CoverageMatrix:
    """Square coverage and cosine arrays over an ordered verb list.

    ``intersections[i][j]`` holds ``|types(i) & types(j)|`` and
    ``type_counts[i]`` holds ``|types(i)|``, so every coverage cell is an
    exact ratio of integers.
    """

    verbs: list
    cover: np.ndarray
    cosine: np.ndarray
    intersections: np.ndarray
    type_counts: list = field(default_factory=list)

    def index(self, verb: str) -> int:
        try:
            return self.verbs.index(verb)
        except ValueError:
            raise UnknownVerbError(verb) from None

    def cov(self, a: str, b: str) -> float:
        """Coverage of *b* by *a*."""
        return float(self.cover[self.index(a), self.index(b)])

    def cos(self, a: str, b: str) -> float:
        return float(self.cosine[self.index(a), self.index(b)])

    def to_dict(self) -> dict:
        return {
            "verbs": list(self.verbs),
            "cover": self.cover.tolist(),
            "cosine": self.cosine.tolist(),
            "intersections": self.intersections.tolist(),
            "type_counts": list(self.type_counts),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CoverageMatrix":
        n = len(data["verbs"])
        return cls(
            verbs=list(data["verbs"]),
            cover=np.array(data["cover"], dtype=float).reshape(n, n),
            cosine=np.array(data["cosine"], dtype=float).reshape(n, n),
            intersections=np.array(data["intersections"], dtype=int).reshape(n, n),
            type_counts=[int(c) for c in data["type_counts"]],
        )


# ---------------------------------------------------------------------------
# Pairwise measures
# ---------------------------------------------------------------------------


def _types(matrix: DistributionMatrix, verb: str) -> frozenset:
    if verb not in matrix:
        raise UnknownVerbError(verb)
    return matrix.types(verb)


def unique_coverage(matrix: DistributionMatrix, a: str, b: str) -> float:
    """Fraction of *b*'s argument types also found among *a*'s."""
    types_a = _types(matrix, a)
    types_b = _types(matrix, b)
    if not types_b:
        raise UndefinedMeasureError(f"coverage of {b!r} is undefined: it has no argument types")
    return len(types_a & types_b) / len(types_b)


def _cosine_from_vectors(u: np.ndarray, v: np.ndarray, a: str, b: str) -> float:
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u == 0.0 or norm_v == 0.0:
        zero = a if norm_u == 0.0 else b
        raise UndefinedMeasureError(f"cosine is undefined: {zero!r} has a zero vector")
    return float(np.clip(np.dot(u, v) / (norm_u * norm_v), 0.0, 1.0))


def cosine(matrix: DistributionMatrix, a: str, b: str) -> float:
    """Cosine of the raw frequency vectors of *a* and *b*."""
    if a == b:
        _types(matrix, a)
        if matrix.total(a) == 0:
            raise UndefinedMeasureError(f"cosine is undefined: {a!r} has a zero vector")
        return 1.0
    vec_a, vec_b = to_vectors(matrix, [a, b])
    return _cosine_from_vectors(vec_a.components, vec_b.components, a, b)


def coverage_matrix(matrix: DistributionMatrix, verbs: list[str]) -> CoverageMatrix:
    """Fill coverage and cosine arrays for every ordered pair of *verbs*."""
    types = [_types(matrix, v) for v in verbs]
    for verb, t in zip(verbs, types):
        if not t:
            raise UndefinedMeasureError(f"coverage of {verb!r} is undefined: it has no argument types")
    n = len(verbs)
    inter = np.zeros((n, n), dtype=int)
    cover = np.ones((n, n), dtype=float)
    cos = np.ones((n, n), dtype=float)
    vectors = to_vectors(matrix, list(verbs)) if n else []

    for i, j in combinations(range(n), 2):
        shared = len(types[i] & types[j])
        inter[i, j] = inter[j, i] = shared
        cover[i, j] = shared / len(types[j])
        cover[j, i] = shared / len(types[i])
        cos[i, j] = cos[j, i] = _cosine_from_vectors(
            vectors[i].components, vectors[j].components, verbs[i], verbs[j]
        )
    for i in range(n):
        inter[i, i] = len(types[i])

    logger.info("Coverage matrix computed for %d verbs (%d ordered pairs).", n, n * (n - 1))
    return CoverageMatrix(
        verbs=list(verbs), cover=cover, cosine=cos, intersections=inter,
        type_counts=[len(t) for t in types],
    )


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def classify_pair(cov_ab: float, cov_ba: float,
                  thresholds: Optional[CoverageThresholds] = None,
                  a: str = "", b: str = "", cosine: Optional[float] = None) -> PairRelation:
    """Classify a pair from ``cov_ab`` (b covered by a) and ``cov_ba``.

    B is subordinate to A when A covers more than ``theta_cov`` of B and
    the reverse coverage is at least ``theta_asym`` lower (absolute gap).
    Otherwise the pair are siblings when both directions reach
    ``theta_sibling_min``, else unrelated.
    """
    t = thresholds or CoverageThresholds()
    if cov_ab > t.theta_cov and cov_ab - cov_ba >= t.theta_asym - _GAP_EPSILON:
        relation = B_SUBORDINATE_TO_A
    elif cov_ba > t.theta_cov and cov_ba - cov_ab >= t.theta_asym - _GAP_EPSILON:
        relation = A_SUBORDINATE_TO_B
    elif min(cov_ab, cov_ba) >= t.theta_sibling_min:
        relation = SIBLINGS
    else:
        relation = UNRELATED
    return PairRelation(a=a, b=b, relation=relation, cov_ab=cov_ab, cov_ba=cov_ba, cosine=cosine)


def classify_all(cm: CoverageMatrix, thresholds: Optional[CoverageThresholds] = None) -> list[PairRelation]:
    """Classify every unordered pair, in verb-list order."""
    return [
        classify_pair(cm.cov(a, b), cm.cov(b, a), thresholds, a=a, b=b, cosine=cm.cos(a, b))
        for a, b in combinations(cm.verbs, 2)
    ]


def subordinates_of(relations: Iterable[PairRelation], verb: str) -> list[str]:
    """Verbs classified as subordinate to *verb*."""
    subs = []
    for rel in relations:
        if rel.a == verb and rel.relation == B_SUBORDINATE_TO_A:
            subs.append(rel.b)
        elif rel.b == verb and rel.relation == A_SUBORDINATE_TO_B:
            subs.append(rel.a)
    return subs


# ---------------------------------------------------------------------------
# Aggregates
# ---------------------------------------------------------------------------


def mean_overlap(cm: CoverageMatrix, verb: str) -> float:
    """Mean coverage between *verb* and every other verb, both directions pooled."""
    n = len(cm.verbs)
    if n < 2:
        raise UndefinedMeasureError("mean overlap needs at least two verbs")
    i = cm.index(verb)
    total = 0.0
    for j in range(n):
        if j != i:
            total += float(cm.cover[i, j]) + float(cm.cover[j, i])
    return total / (2 * (n - 1))


def subset_coverage(cm: CoverageMatrix, head: str, members: Iterable[str]) -> tuple[float, float]:
    """Mean coverage of *members* by *head*, and mean coverage of *head* by them."""
    members = [m for m in members if m != head]
    if not members:
        raise UndefinedMeasureError("subset coverage needs at least one member")
    down = sum(cm.cov(head, m) for m in members) / len(members)
    up = sum(cm.cov(m, head) for m in members) / len(members)
    return down, up


def within_subset_coverage(cm: CoverageMatrix, members: Iterable[str]) -> float:
    """Mean coverage over ordered pairs of distinct *members*."""
    members = list(members)
    if len(members) < 2:
        raise UndefinedMeasureError("within-subset coverage needs at least two members")
    values = [cm.cov(x, y) for x in members for y in members if x != y]
    return sum(values) / len(values)


# ---------------------------------------------------------------------------
# Graph export
# ---------------------------------------------------------------------------


def coverage_graph(cm: CoverageMatrix, relations: Iterable[PairRelation]) -> nx.DiGraph:
    """Relation graph: head -> subordinate edges and one edge per sibling pair.

    Sibling edges carry ``relation="sibling"`` and ``undirected=True``.
    """
    graph = nx.DiGraph()
    for i, verb in enumerate(cm.verbs):
        graph.add_node(verb, types=int(cm.type_counts[i]))
    for rel in relations:
        if rel.relation == B_SUBORDINATE_TO_A:
            graph.add_edge(rel.a, rel.b, relation="subordinate", coverage=rel.cov_ab,
                           reverse_coverage=rel.cov_ba, undirected=False)
        elif rel.relation == A_SUBORDINATE_TO_B:
            graph.add_edge(rel.b, rel.a, relation="subordinate", coverage=rel.cov_ba,
                           reverse_coverage=rel.cov_ab, undirected=False)
        elif rel.relation == SIBLINGS:
            graph.add_edge(rel.a, rel.b, relation="sibling", coverage=rel.cov_ab,
                           reverse_coverage=rel.cov_ba, undirected=True)
    return graph
