"""
Main entry point for the metaphor-hierarchy corpus pipeline.

Each subcommand reads the previous stage's artifact from the workspace and
writes its own:

  ingest     raw documents -> article store (articles.db, corpus.json)
  extract    articles or annotated rows -> verb x argument matrix (matrix.json)
  coverage   matrix -> coverage / cosine matrices and pair relations (coverage.json)
  cluster    matrix -> k-means ensemble summary (ensemble.json)
  hierarchy  coverage + ensemble -> hierarchy report (hierarchy.json);
             given --input, runs the whole chain first
  synth      plan -> synthetic corpus (corpus.jsonl) and oracle (synth.json)
  report     tables and readable summaries of whatever artifacts exist

Exit codes: 0 success, 1 user/config error, 2 data error, 3 internal error.

Usage::

    python run.py synth --seed 7 --out work
    python run.py hierarchy --input work/corpus.jsonl --seed 7 --out work
    python run.py report --out work
"""

import argparse
import hashlib
import logging
import sys
from pathlib import Path
from typing import Optional

# ---------------------------------------------------------------------------
# Ensure project root is on sys.path so that package imports work regardless
# of the working directory the script is launched from.
# ---------------------------------------------------------------------------
PROJECT_ROOT = str(Path(__file__).resolve().parent)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

# ---------------------------------------------------------------------------
# Project imports
# ---------------------------------------------------------------------------
from config.settings import STUDY_PLAN_FILE, setup_logging
from scripts.artifacts import (
    Artifact,
    file_digest,
    read_artifact,
    require_config,
    require_same_input,
    write_artifact,
)
from scripts.clustering import EnsembleSummary, ensemble
from scripts.corpus_store import ingest, iter_documents, list_articles, store_counts, store_path
from scripts.coverage import CoverageMatrix, classify_all, coverage_graph, coverage_matrix
from scripts.distributions import DistributionMatrix, build_matrix, to_triples, to_vectors
from scripts.errors import ConfigError, DataError, PipelineError
from scripts.hierarchy import HierarchyReport, hierarchy_graph, infer
from scripts.lingpipe import TagMap, VerbLexicon, annotate_article, dump_annotated, load_annotated
from scripts.reports import (
    relations_frame,
    render_frame,
    render_hierarchy,
    render_top_arguments,
    signatures_frame,
    singletons_frame,
    square_frame,
    top_arguments_frame,
    verb_summary_frame,
    write_graph,
    write_table,
)
from scripts.run_config import RunConfig
from scripts.synthgen import PlantPlan, generate, write_corpus

import pandas as pd

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("ingest", "extract", "coverage", "cluster", "hierarchy", "synth", "report")
SEEDED_SUBCOMMANDS = ("cluster", "hierarchy")


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _lexicon_from_payload(payload: dict) -> VerbLexicon:
    return VerbLexicon.from_records(payload["lexicon"])


def _select_verbs(matrix: DistributionMatrix, lexicon: VerbLexicon, polarity: str) -> tuple[list, list]:
    """Lexicon verbs of *polarity* split into (analysable, dropped for lack of arguments)."""
    wanted = lexicon.by_polarity(polarity)
    verbs = [v for v in wanted if v in matrix]
    dropped = [v for v in wanted if v not in matrix]
    if dropped:
        logger.warning("Dropping %d verb(s) with no argument types: %s", len(dropped), ", ".join(dropped))
    if not verbs:
        raise DataError(f"no {polarity} verb has any argument in the matrix")
    return verbs, dropped


def _wants(config: RunConfig, fmt: str) -> bool:
    return fmt in config.formats


def _upstream(config: RunConfig, name: str) -> Artifact:
    """Read artifact *name* and check it was built under this run's settings."""
    artifact = read_artifact(config.out_dir, name)
    require_config(artifact, config.to_dict())
    return artifact


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def stage_ingest(config: RunConfig, input_path: Optional[Path]) -> Path:
    if input_path is None:
        raise ConfigError("input", "ingest needs --input (a directory of documents or a .jsonl file)")
    db_path = store_path(config.out_dir)
    stats = ingest(db_path, iter_documents(input_path), encoding=config.encoding)
    logger.info("Ingest stats: %s", {k: v for k, v in stats.to_dict().items() if k != "errors"})

    digest = hashlib.sha256()
    for article in list_articles(db_path):
        digest.update(f"{article.id}\t{article.text}\n".encode("utf-8"))
    payload = {"store": store_counts(db_path), "articles_digest": digest.hexdigest()}
    return write_artifact(config.out_dir, "corpus", payload, config.to_dict())


def stage_extract(config: RunConfig, input_path: Optional[Path]) -> Path:
    lexicon = VerbLexicon.load(config.lexicon_path)
    if config.input_mode == "annotated":
        if input_path is None:
            raise ConfigError("input", "annotated mode needs --input pointing at an annotated file")
        with open(input_path, "r", encoding=config.encoding) as fh:
            sentences = load_annotated(fh, TagMap.load(), article_id=Path(input_path).stem)
        inputs = {"annotations": file_digest(input_path)}
        n_articles = len({s.article_id for s in sentences})
    else:
        corpus = _upstream(config, "corpus")
        articles = list_articles(store_path(config.out_dir))
        logger.info("Annotating %d articles ...", len(articles))
        sentences = [s for article in articles for s in annotate_article(article.id, article.text, lexicon)]
        inputs = {"corpus": corpus.digest}
        n_articles = len(articles)
        (Path(config.out_dir) / "annotations.vert").write_text(
            dump_annotated(sentences), encoding="utf-8", newline="\n")

    matrix = build_matrix(sentences, lexicon)
    if _wants(config, "tables"):
        write_table(pd.DataFrame(to_triples(matrix), columns=["verb", "argument", "count"]),
                    Path(config.out_dir) / "matrix.tsv")
    payload = {
        "matrix": matrix.to_dict(),
        "lexicon": lexicon.to_records(),
        "articles": n_articles,
        "sentences": len(sentences),
    }
    return write_artifact(config.out_dir, "matrix", payload, config.to_dict(), inputs)


def stage_coverage(config: RunConfig) -> Path:
    source = _upstream(config, "matrix")
    matrix = DistributionMatrix.from_dict(source.payload["matrix"])
    verbs, dropped = _select_verbs(matrix, _lexicon_from_payload(source.payload), config.polarity)

    cm = coverage_matrix(matrix, verbs)
    relations = classify_all(cm, config.thresholds)
    out = Path(config.out_dir)
    if _wants(config, "tables"):
        write_table(square_frame(cm, "cover"), out / "coverage.tsv", index=True)
        write_table(square_frame(cm, "cosine"), out / "cosine.tsv", index=True)
        write_table(relations_frame(relations), out / "relations.tsv")
    if _wants(config, "graph"):
        write_graph(coverage_graph(cm, relations), out / "coverage.graphml")

    payload = {
        "verbs": verbs,
        "dropped": dropped,
        "coverage": cm.to_dict(),
        "relations": [r.to_dict() for r in relations],
    }
    return write_artifact(config.out_dir, "coverage", payload, config.to_dict(), {"matrix": source.digest})


def stage_cluster(config: RunConfig) -> Path:
    source = _upstream(config, "matrix")
    matrix = DistributionMatrix.from_dict(source.payload["matrix"])
    verbs, _ = _select_verbs(matrix, _lexicon_from_payload(source.payload), config.polarity)

    vectors = to_vectors(matrix, verbs, normalize=config.normalize_vectors)
    logger.info("Clustering %d verbs over %d argument dimensions.", len(verbs), len(vectors[0].vocab))
    summary = ensemble(vectors, config.ensemble)
    out = Path(config.out_dir)
    if _wants(config, "tables"):
        write_table(signatures_frame(summary), out / "signatures.tsv")
        write_table(singletons_frame(summary), out / "singletons.tsv")
    return write_artifact(config.out_dir, "ensemble", summary.to_dict(), config.to_dict(), {"matrix": source.digest})


def stage_hierarchy(config: RunConfig, input_path: Optional[Path]) -> Path:
    if input_path is not None:
        logger.info("Step 1 — Running the full chain on %s", input_path)
        if config.input_mode == "raw-text":
            stage_ingest(config, input_path)
        stage_extract(config, input_path)
        stage_coverage(config)
        stage_cluster(config)

    logger.info("Step 2 — Inferring the hierarchy")
    cov = _upstream(config, "coverage")
    ens = _upstream(config, "ensemble")
    require_same_input("matrix", cov, ens)
    cm = CoverageMatrix.from_dict(cov.payload["coverage"])
    summary = EnsembleSummary.from_dict(ens.payload)
    report = infer(cm, summary, config.hierarchy)

    out = Path(config.out_dir)
    if _wants(config, "graph"):
        write_graph(hierarchy_graph(report), out / "hierarchy.graphml")
    if _wants(config, "report"):
        (out / "hierarchy.txt").write_text(render_hierarchy(report), encoding="utf-8", newline="\n")
    return write_artifact(config.out_dir, "hierarchy", report.to_dict(), config.to_dict(),
                          {"coverage": cov.digest, "ensemble": ens.digest})


def stage_synth(config: RunConfig) -> Path:
    plan_path = config.plan_path or STUDY_PLAN_FILE
    plan = PlantPlan.from_yaml(plan_path)
    if config.seed is not None:
        plan.seed = config.seed
    if plan.seed is None:
        raise ConfigError("seed", "synth needs a seed (use --seed, the config file or the plan)")
    if config.noise is not None:
        plan.noise = bool(config.noise)

    lexicon = VerbLexicon.load(config.lexicon_path)
    records, oracle = generate(plan, lexicon, config.thresholds.theta_outlier)
    corpus_path = write_corpus(records, Path(config.out_dir) / "corpus.jsonl")
    payload = {
        "plan": plan.to_dict(),
        "oracle": oracle.to_dict(),
        "corpus": corpus_path.name,
        "corpus_digest": file_digest(corpus_path),
        "articles": len(records),
    }
    return write_artifact(config.out_dir, "synth", payload, config.to_dict())


def stage_report(config: RunConfig) -> Path:
    out = Path(config.out_dir)
    source = _upstream(config, "matrix")
    matrix = DistributionMatrix.from_dict(source.payload["matrix"])
    lexicon = _lexicon_from_payload(source.payload)
    verbs = [v for v in lexicon.by_polarity(config.polarity) if v in matrix]

    sections = [
        "Run configuration\n-----------------\n" + "\n".join(
            f"{key}: {value}" for key, value in sorted(config.to_dict().items())) + "\n"
    ]
    top = top_arguments_frame(matrix, verbs, config.top_n)
    sections.append(render_top_arguments(top))
    tables = {"top_arguments.tsv": top}
    if matrix.corpus_open_class_total > 0:
        summary_rows = verb_summary_frame(matrix, lexicon)
        sections.append(render_frame(summary_rows, "Verb occurrences (% of open-class corpus)"))
        tables["verb_summary.tsv"] = summary_rows

    if (out / "ensemble.json").exists():
        summary = EnsembleSummary.from_dict(read_artifact(out, "ensemble").payload)
        signatures = signatures_frame(summary, 5)
        sections.append(render_frame(
            signatures, f"Top clusters over {summary.runs_total} k-means runs "
                        f"(k={summary.config.get('k_min')}..{summary.config.get('k_max')}, "
                        f"seed {summary.config.get('master_seed')})"))
        sections.append(render_frame(singletons_frame(summary), "Singleton frequencies"))
        tables["signatures.tsv"] = signatures_frame(summary)
        tables["singletons.tsv"] = singletons_frame(summary)
    if (out / "hierarchy.json").exists():
        sections.append(render_hierarchy(HierarchyReport.from_dict(read_artifact(out, "hierarchy").payload)))

    if _wants(config, "tables"):
        for name, frame in tables.items():
            write_table(frame, out / name)
    path = out / "report.txt"
    path.write_text("\n".join(sections), encoding="utf-8", newline="\n")
    logger.info("Wrote report %s", path)
    return path


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def run_subcommand(name: str, config: RunConfig, input_path: Optional[Path] = None) -> int:
    """Run one subcommand and return its exit status."""
    try:
        if name not in SUBCOMMANDS:
            raise ConfigError("subcommand", f"must be one of {SUBCOMMANDS}, got {name!r}")
        config.validate(require_seed=name in SEEDED_SUBCOMMANDS)
        Path(config.out_dir).mkdir(parents=True, exist_ok=True)

        logger.info("=" * 60)
        logger.info("Metaphor hierarchy pipeline — %s", name)
        logger.info("=" * 60)
        if name == "ingest":
            stage_ingest(config, input_path)
        elif name == "extract":
            stage_extract(config, input_path)
        elif name == "coverage":
            stage_coverage(config)
        elif name == "cluster":
            stage_cluster(config)
        elif name == "hierarchy":
            stage_hierarchy(config, input_path)
        elif name == "synth":
            stage_synth(config)
        else:
            stage_report(config)
        logger.info("%s finished.", name)
        return 0
    except PipelineError as exc:
        logger.error("%s failed: %s", name, exc)
        return exc.exit_code
    except Exception:
        logger.exception("%s failed with an unhandled exception.", name)
        return 3


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("arguments", message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(description="Verb-argument coverage and metaphor hierarchy pipeline")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--input", type=Path, default=None,
                        help="Corpus directory / .jsonl file, or annotated rows in annotated mode")
    parser.add_argument("--config", type=Path, default=None, help="YAML run configuration")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--k-range", default=None, help="Group-count range as <min>:<max>")
    parser.add_argument("--runs-per-k", type=int, default=None)
    parser.add_argument("--theta-cov", type=float, default=None)
    parser.add_argument("--theta-asym", type=float, default=None)
    parser.add_argument("--theta-outlier", type=float, default=None)
    parser.add_argument("--theta-singleton", type=float, default=None)
    parser.add_argument("--out", type=Path, default=None, help="Workspace directory for artifacts")
    parser.add_argument("--format", default=None, help="Comma-separated subset of report,tables,graph")
    parser.add_argument("--polarity", default=None, choices=["UP", "DOWN", "ALL", "up", "down", "all"])
    parser.add_argument("--input-mode", default=None, choices=["raw-text", "annotated"])
    parser.add_argument("--lexicon", type=Path, default=None)
    parser.add_argument("--plan", type=Path, default=None, help="Synthetic plan (YAML)")
    parser.add_argument("--noise", action="store_true", default=None,
                        help="Inject distractor sentences into synthetic corpora")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--verbose", action="store_true")
    return parser


def _parse_k_range(text: Optional[str]) -> tuple[Optional[int], Optional[int]]:
    if text is None:
        return None, None
    try:
        low, high = (int(part) for part in text.split(":"))
    except ValueError:
        raise ConfigError("k_range", f"expected <min>:<max>, got {text!r}") from None
    return low, high


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_yaml(args.config) if args.config else RunConfig()
    k_min, k_max = _parse_k_range(args.k_range)
    return config.with_overrides(
        seed=args.seed,
        k_min=k_min,
        k_max=k_max,
        runs_per_k=args.runs_per_k,
        workers=args.workers,
        theta_cov=args.theta_cov,
        theta_asym=args.theta_asym,
        theta_outlier=args.theta_outlier,
        theta_singleton=args.theta_singleton,
        out=args.out,
        formats=args.format.split(",") if args.format else None,
        polarity=args.polarity,
        input_mode=args.input_mode,
        lexicon=args.lexicon,
        plan=args.plan,
        noise=args.noise,
    )


def main(argv: Optional[list] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = config_from_args(args)
    except PipelineError as exc:
        setup_logging()
        logger.error("%s", exc)
        return exc.exit_code

    setup_logging(level=logging.DEBUG if args.verbose else logging.INFO,
                  log_file=Path(config.out_dir) / "pipeline.log")
    return run_subcommand(args.subcommand, config, args.input)


if __name__ == "__main__":
    sys.exit(main())
