"""
Tests for scripts.hierarchy -- outliers, superordinates, sibling groups and
the hierarchy graph, on the planted study geometry's vocabularies.
"""

import sys
from collections import Counter
from pathlib import Path

import pytest

PROJECT_ROOT = str(Path(__file__).resolve().parent.parent)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from scripts.clustering import EnsembleSummary
from scripts.coverage import CoverageThresholds, coverage_matrix
from scripts.distributions import DistributionMatrix
from scripts.errors import ConfigError, DataError
from scripts.hierarchy import (
    OUTLIER,
    SIBLING,
    SUBORDINATE,
    SUPER,
    HierarchyConfig,
    HierarchyReport,
    hierarchy_graph,
    infer,
)
from scripts.synthgen import STUDY_ROLES, study_plan


@pytest.fixture(scope="module")
def study_cm():
    """Coverage over the planted UP vocabularies, one token per type."""
    plan = study_plan("UP", seed=1)
    matrix = DistributionMatrix(counts={pv.verb: Counter(pv.vocabulary) for pv in plan.verbs})
    return coverage_matrix(matrix, [pv.verb for pv in plan.verbs])


def _summary(verbs, singletons, runs=900, groups=None):
    return EnsembleSummary(
        verbs=list(verbs),
        runs_total=runs,
        singleton_counts=Counter(singletons),
        group_counts=Counter(groups or {}),
    )


# ---------------------------------------------------------------------------
# Inference
# ---------------------------------------------------------------------------

class TestInfer:
    def test_planted_roles_recovered(self, study_cm):
        report = infer(study_cm, _summary(study_cm.verbs, {"rise": 880, "elevate": 300}))
        roles = STUDY_ROLES["UP"]
        assert [row["verb"] for row in report.superordinates] == ["rise"]
        assert report.superordinates[0]["subordinates"] == sorted(roles[SUBORDINATE])
        assert [g["members"] for g in report.sibling_groups] == [sorted(roles[SIBLING])]
        assert [row["verb"] for row in report.outliers] == sorted(roles[OUTLIER])
        assert report.unassigned == []

    def test_head_statistics(self, study_cm):
        report = infer(study_cm, _summary(study_cm.verbs, {"rise": 900}))
        row = report.superordinates[0]
        assert row["singleton_frequency"] == 1.0
        assert row["mean_coverage"] == pytest.approx(0.70)
        assert row["mean_reverse_coverage"] == pytest.approx(0.35)
        # adjacent subordinate windows share four nouns
        assert row["within_coverage"] == pytest.approx((10 * 0.44 + 20 * 0.40) / 30)
        assert {p["verb"] for p in row["other_pairs"]} == set(STUDY_ROLES["UP"][SIBLING])

    def test_every_verb_has_exactly_one_role(self, study_cm):
        report = infer(study_cm, _summary(study_cm.verbs, {"rise": 900}))
        roles = report.roles()
        assert sorted(roles) == sorted(study_cm.verbs)
        assert roles["rise"] == SUPER
        assert roles["surge"] == SUBORDINATE
        assert roles["rally"] == SIBLING
        assert roles["alleviate"] == OUTLIER

    def test_no_head_without_singleton_evidence(self, study_cm):
        report = infer(study_cm, _summary(study_cm.verbs, {"rise": 90}))
        assert report.superordinates == []
        assert report.roles()["rise"] != SUPER

    def test_no_head_with_too_few_subordinates(self, study_cm):
        config = HierarchyConfig(min_subordinates=7)
        report = infer(study_cm, _summary(study_cm.verbs, {"rise": 900}), config)
        assert report.superordinates == []

    def test_sibling_coverage_band(self, study_cm):
        report = infer(study_cm, _summary(study_cm.verbs, {"rise": 900}))
        group = report.sibling_groups[0]
        assert group["min_coverage"] == pytest.approx(65 / 150)
        assert group["max_coverage"] == pytest.approx(65 / 150)

    def test_advisory_groups(self, study_cm):
        summary = _summary(study_cm.verbs, {"rise": 900}, groups={"gain,increase": 50, "jump,soar": 5})
        report = infer(study_cm, summary)
        assert report.advisory_groups == [{"group": ["gain", "increase"], "count": 50, "share": 50 / 900}]

    def test_identical_verbs_form_one_sibling_group(self):
        profile = {"index": 3, "price": 2, "share": 1}
        matrix = DistributionMatrix(counts={"climb": Counter(profile), "soar": Counter(profile)})
        cm = coverage_matrix(matrix, ["climb", "soar"])
        report = infer(cm, _summary(cm.verbs, {}))
        assert report.superordinates == []
        assert report.outliers == []
        assert [g["members"] for g in report.sibling_groups] == [["climb", "soar"]]
        assert report.sibling_groups[0]["mean_coverage"] == 1.0
        assert report.unassigned == []

    def test_raising_singleton_threshold_never_adds_a_head(self, study_cm):
        summary = _summary(study_cm.verbs, {"rise": 880, "rally": 700, "surge": 500, "elevate": 300})
        previous = None
        for theta in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0):
            report = infer(study_cm, summary, HierarchyConfig(theta_singleton=theta))
            heads = {row["verb"] for row in report.superordinates}
            if previous is not None:
                assert heads <= previous
            previous = heads
        assert previous == set()

    def test_raising_outlier_threshold_never_removes_an_outlier(self, study_cm):
        summary = _summary(study_cm.verbs, {"rise": 900})
        previous = set()
        for theta in (0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5):
            config = HierarchyConfig(thresholds=CoverageThresholds(theta_outlier=theta))
            outliers = {row["verb"] for row in infer(study_cm, summary, config).outliers}
            assert outliers >= previous
            previous = outliers
        assert set(STUDY_ROLES["UP"][OUTLIER]) <= previous

    def test_verb_sets_must_match(self, study_cm):
        with pytest.raises(DataError):
            infer(study_cm, _summary(["rise", "fall"], {"rise": 900}))

    def test_invalid_config(self, study_cm):
        with pytest.raises(ConfigError):
            infer(study_cm, _summary(study_cm.verbs, {}), HierarchyConfig(theta_singleton=0.0))

    def test_report_dict_restores(self, study_cm):
        report = infer(study_cm, _summary(study_cm.verbs, {"rise": 900}))
        again = HierarchyReport.from_dict(report.to_dict())
        assert again.roles() == report.roles()
        assert again.to_dict() == report.to_dict()


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------

class TestHierarchyGraph:
    def test_nodes_and_edges(self, study_cm):
        graph = hierarchy_graph(infer(study_cm, _summary(study_cm.verbs, {"rise": 900})))
        assert set(graph.nodes) == set(study_cm.verbs)
        assert graph.nodes["rise"]["role"] == SUPER
        assert graph.has_edge("rise", "surge")
        assert graph.edges["gain", "rally"]["relation"] == "sibling"
        assert graph.degree("elevate") == 0
