"""
Delimited tables, readable text renderings and graph files.

Tables are pandas DataFrames written as tab-separated text with four
decimals; graphs are written as GraphML.  The table layouts are:

- top arguments: verb, rank, argument, share
- verb summary: verb, polarity, occurrences, percent
- signatures: rank, signature, percent, count
- singletons: verb, singleton_count, singleton_frequency
- relations: a, b, cov_ab, cov_ba, cosine, relation
"""

import logging
from pathlib import Path
from typing import Iterable, Optional

import networkx as nx
import pandas as pd

from config.settings import OUTPUT_SETTINGS
from scripts.clustering import EnsembleSummary, display_signature, singleton_frequency, top_signatures
from scripts.coverage import CoverageMatrix, PairRelation
from scripts.distributions import DistributionMatrix, top_arguments, verb_summary
from scripts.hierarchy import HierarchyReport
from scripts.lingpipe import VerbLexicon

logger = logging.getLogger(__name__)

FLOAT_FORMAT = OUTPUT_SETTINGS["float_format"]


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


def top_arguments_frame(matrix: DistributionMatrix, verbs: Iterable[str], n: int) -> pd.DataFrame:
    rows = []
    for verb in verbs:
        if verb not in matrix:
            continue
        for rank, (arg, share) in enumerate(top_arguments(matrix, verb, n), 1):
            rows.append({"verb": verb, "rank": rank, "argument": arg, "share": share})
    return pd.DataFrame(rows, columns=["verb", "rank", "argument", "share"])


def verb_summary_frame(matrix: DistributionMatrix, lexicon: VerbLexicon) -> pd.DataFrame:
    rows = [
        {"verb": row.verb, "polarity": lexicon.polarity.get(row.verb, "OTHER"),
         "occurrences": row.occurrences, "percent": row.percent}
        for row in verb_summary(matrix, lexicon)
    ]
    return pd.DataFrame(rows, columns=["verb", "polarity", "occurrences", "percent"])


def signatures_frame(summary: EnsembleSummary, n: Optional[int] = None) -> pd.DataFrame:
    limit = len(summary.signature_counts) if n is None else n
    rows = [
        {"rank": rank, "signature": display_signature(sig), "percent": percent, "count": count}
        for rank, (sig, percent, count) in enumerate(top_signatures(summary, limit), 1)
    ]
    return pd.DataFrame(rows, columns=["rank", "signature", "percent", "count"])


def singletons_frame(summary: EnsembleSummary) -> pd.DataFrame:
    rows = [
        {"verb": verb, "singleton_count": summary.singleton_counts.get(verb, 0),
         "singleton_frequency": singleton_frequency(summary, verb) if summary.runs_total else 0.0}
        for verb in summary.verbs
    ]
    frame = pd.DataFrame(rows, columns=["verb", "singleton_count", "singleton_frequency"])
    return frame.sort_values(["singleton_count", "verb"], ascending=[False, True], ignore_index=True)


def square_frame(cm: CoverageMatrix, which: str = "cover") -> pd.DataFrame:
    """Square matrix with verb headers; row A, column B holds ``which[A][B]``."""
    values = cm.cover if which == "cover" else cm.cosine
    return pd.DataFrame(values, index=pd.Index(cm.verbs, name="verb"), columns=cm.verbs)


def relations_frame(relations: Iterable) -> pd.DataFrame:
    rows = [r.to_dict() if isinstance(r, PairRelation) else dict(r) for r in relations]
    return pd.DataFrame(rows, columns=["a", "b", "cov_ab", "cov_ba", "cosine", "relation"])


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------


def write_table(frame: pd.DataFrame, path: Path, index: bool = False) -> Path:
    """Write *frame* as tab-separated text with four decimals."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, sep="\t", index=index, float_format=FLOAT_FORMAT)
    logger.info("Wrote table %s (%d rows)", path.name, len(frame))
    return path


def write_graph(graph: nx.Graph, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    nx.write_graphml(graph, path)
    logger.info("Wrote graph %s (%d nodes, %d edges)", path.name, graph.number_of_nodes(), graph.number_of_edges())
    return path


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------


def render_frame(frame: pd.DataFrame, title: str) -> str:
    """A titled fixed-width rendering of *frame*."""
    body = frame.to_string(index=False, float_format=lambda x: f"{x:.4f}") if len(frame) else "(none)"
    return f"{title}\n{'-' * len(title)}\n{body}\n"


def render_top_arguments(frame: pd.DataFrame) -> str:
    """Per-verb blocks of ranked arguments and their shares."""
    blocks = []
    for verb, group in frame.groupby("verb", sort=False):
        blocks.append(render_frame(group[["rank", "argument", "share"]],
                                   f"Top arguments of '{verb}' (% of its argument tokens)"))
    return "\n".join(blocks) if blocks else "Top arguments\n-------------\n(none)\n"


def render_hierarchy(report: HierarchyReport) -> str:
    """Readable summary of a hierarchy report."""
    lines = ["Metaphor hierarchy", "=" * 18]
    if not report.superordinates:
        lines.append("Superordinates: none")
    for row in report.superordinates:
        lines.append(
            f"Superordinate {row['verb']} (singleton {row['singleton_frequency']:.4f}): "
            f"covers {row['mean_coverage']:.4f} of {len(row['subordinates'])} subordinates, "
            f"covered {row['mean_reverse_coverage']:.4f} by them"
        )
        lines.append(f"  subordinates: {', '.join(row['subordinates'])}")
        if row.get("within_coverage") is not None:
            lines.append(f"  mean coverage among subordinates: {row['within_coverage']:.4f}")
        for pair in row.get("other_pairs", []):
            lines.append(
                f"  vs {pair['verb']}: head covers {pair['coverage_by_head']:.4f}, "
                f"covered {pair['coverage_of_head']:.4f}"
            )
    for i, group in enumerate(report.sibling_groups, 1):
        lines.append(
            f"Sibling group {i}: {', '.join(group['members'])} "
            f"(coverage {group['min_coverage']:.4f}-{group['max_coverage']:.4f}, "
            f"mean {group['mean_coverage']:.4f})"
        )
    if report.outliers:
        lines.append("Outliers: " + ", ".join(
            f"{row['verb']} ({row['mean_overlap']:.4f})" for row in report.outliers))
    else:
        lines.append("Outliers: none")
    lines.append("Unassigned: " + (", ".join(report.unassigned) or "none"))
    if report.advisory_groups:
        lines.append("Advisory groups (named in clustering runs):")
        for row in report.advisory_groups:
            lines.append(f"  [{', '.join(row['group'])}] {100 * row['share']:.4f}% ({row['count']})")
    lines.append("Thresholds: " + ", ".join(
        f"{key}={value}" for key, value in sorted(report.thresholds.items())))
    return "\n".join(lines) + "\n"
