"""
Verb x argument frequency matrix and per-verb distribution statistics.

Accumulates :class:`~scripts.lingpipe.VerbArgPair` streams into a sparse
count matrix and answers the questions asked of it downstream: argument
shares and top-n rankings, occurrence counts against the open-class corpus
size, concentration of mass in the top fifth of argument types, and dense
vector views for clustering.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from config.settings import DISTRIBUTION_SETTINGS
from scripts.errors import DataError, UndefinedMeasureError, UnknownVerbError
from scripts.lingpipe import (
    VERB,
    AnnotatedSentence,
    VerbArgPair,
    VerbLexicon,
    count_open_class,
    extract_arguments,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Dataclasses
# ---------------------------------------------------------------------------


@dataclass
class DistributionMatrix:
    """Sparse ``verb -> argument -> count`` table.

    ``verb_occurrences`` counts VERB tokens per lexicon lemma (whether or
    not an argument was found) and ``corpus_open_class_total`` the
    open-class tokens seen while building the matrix.  ``role_counts``
    splits each verb's argument tokens by SUBJECT / COMPLEMENT.
    """

    counts: dict = field(default_factory=dict)
    verb_occurrences: Counter = field(default_factory=Counter)
    corpus_open_class_total: int = 0
    role_counts: dict = field(default_factory=dict)

    @property
    def verb_totals(self) -> dict:
        """Total argument tokens N_v per verb."""
        return {verb: sum(args.values()) for verb, args in self.counts.items()}

    @property
    def vocab(self) -> list[str]:
        """Every argument lemma with a nonzero count, lexicographic."""
        return sorted({arg for args in self.counts.values() for arg in args})

    @property
    def verbs(self) -> list[str]:
        """Verbs with at least one argument, lexicographic."""
        return sorted(self.counts)

    def __contains__(self, verb: str) -> bool:
        return verb in self.counts

    def count(self, verb: str, argument: str) -> int:
        return self.counts.get(verb, {}).get(argument, 0)

    def total(self, verb: str) -> int:
        return sum(self.counts.get(verb, {}).values())

    def types(self, verb: str) -> frozenset:
        """Argument types of *verb* (empty for unknown verbs)."""
        return frozenset(self.counts.get(verb, {}))

    # --- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "counts": {v: dict(sorted(a.items())) for v, a in sorted(self.counts.items())},
            "verb_occurrences": dict(sorted(self.verb_occurrences.items())),
            "corpus_open_class_total": self.corpus_open_class_total,
            "role_counts": {v: dict(sorted(r.items())) for v, r in sorted(self.role_counts.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DistributionMatrix":
        return cls(
            counts={v: Counter(a) for v, a in data.get("counts", {}).items()},
            verb_occurrences=Counter(data.get("verb_occurrences", {})),
            corpus_open_class_total=int(data.get("corpus_open_class_total", 0)),
            role_counts={v: Counter(r) for v, r in data.get("role_counts", {}).items()},
        )


@dataclass(frozen=True)
class VerbVector:
    """Dense frequency vector of one verb over a shared vocab."""

    verb: str
    vocab: tuple
    components: np.ndarray = field(compare=False)

    def component(self, argument: str) -> float:
        return float(self.components[self.vocab.index(argument)])


@dataclass(frozen=True)
class VerbSummaryRow:
    verb: str
    occurrences: int
    percent: float


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def accumulate(pairs: Iterable[VerbArgPair],
               matrix: Optional[DistributionMatrix] = None) -> DistributionMatrix:
    """Count (verb, argument) occurrences, roles merged.

    When *matrix* is given it is updated in place and returned.
    """
    matrix = matrix if matrix is not None else DistributionMatrix()
    for pair in pairs:
        matrix.counts.setdefault(pair.verb, Counter())[pair.argument] += 1
        matrix.role_counts.setdefault(pair.verb, Counter())[pair.role] += 1
    return matrix


def merge(first: DistributionMatrix, second: DistributionMatrix) -> DistributionMatrix:
    """Sum two matrices into a new one."""
    merged = DistributionMatrix()
    for source in (first, second):
        for verb, args in source.counts.items():
            merged.counts.setdefault(verb, Counter()).update(args)
        for verb, roles in source.role_counts.items():
            merged.role_counts.setdefault(verb, Counter()).update(roles)
        merged.verb_occurrences.update(source.verb_occurrences)
        merged.corpus_open_class_total += source.corpus_open_class_total
    return merged


def build_matrix(sentences: Iterable[AnnotatedSentence], lexicon: VerbLexicon) -> DistributionMatrix:
    """Extract arguments from *sentences* and accumulate them in one pass.

    Also records VERB-token occurrences per lexicon lemma and the corpus
    open-class token total.
    """
    matrix = DistributionMatrix()
    n_sentences = 0
    n_pairs = 0
    for sentence in sentences:
        n_sentences += 1
        matrix.corpus_open_class_total += count_open_class(sentence)
        for tok in sentence.tokens:
            if tok.pos == VERB and tok.lemma in lexicon:
                matrix.verb_occurrences[tok.lemma] += 1
        pairs = extract_arguments(sentence, lexicon)
        n_pairs += len(pairs)
        accumulate(pairs, matrix)
    logger.info(
        "Built matrix from %d sentences: %d pairs, %d verbs, %d argument types, %d open-class tokens.",
        n_sentences, n_pairs, len(matrix.counts), len(matrix.vocab), matrix.corpus_open_class_total,
    )
    return matrix


# ---------------------------------------------------------------------------
# Per-verb statistics
# ---------------------------------------------------------------------------


def _require(matrix: DistributionMatrix, verb: str) -> Counter:
    if verb not in matrix.counts:
        raise UnknownVerbError(verb)
    return matrix.counts[verb]


def _ranked(args: Counter) -> list[tuple[str, int]]:
    """Arguments by descending count, ties by lemma."""
    return sorted(args.items(), key=lambda item: (-item[1], item[0]))


def argument_share(matrix: DistributionMatrix, verb: str, argument: str) -> float:
    """Percentage of *verb*'s argument tokens taken by *argument*."""
    args = _require(matrix, verb)
    return 100.0 * args.get(argument, 0) / sum(args.values())


def top_arguments(matrix: DistributionMatrix, verb: str,
                  n: int = DISTRIBUTION_SETTINGS["top_n"]) -> list[tuple[str, float]]:
    """The *n* most frequent arguments of *verb* with their shares."""
    args = _require(matrix, verb)
    total = sum(args.values())
    return [(arg, 100.0 * count / total) for arg, count in _ranked(args)[:max(0, n)]]


def verb_summary(matrix: DistributionMatrix, lexicon: VerbLexicon) -> list[VerbSummaryRow]:
    """Occurrence count and share of the open-class corpus for each lexicon verb."""
    total = matrix.corpus_open_class_total
    if total <= 0:
        raise UndefinedMeasureError("open-class corpus total is zero; percentages are undefined")
    return [
        VerbSummaryRow(verb, matrix.verb_occurrences.get(verb, 0),
                       100.0 * matrix.verb_occurrences.get(verb, 0) / total)
        for verb in lexicon.lemmas
    ]


def pareto_stat(matrix: DistributionMatrix, verb: str,
                fraction: float = DISTRIBUTION_SETTINGS["pareto_fraction"]) -> float:
    """Share of *verb*'s mass held by its top ``ceil(fraction * types)`` arguments."""
    args = _require(matrix, verb)
    ranked = _ranked(args)
    # the epsilon keeps exact multiples such as 0.2 * 5 from rounding up
    top = max(1, math.ceil(fraction * len(ranked) - 1e-9))
    return sum(count for _, count in ranked[:top]) / sum(args.values())


# ---------------------------------------------------------------------------
# Vector views
# ---------------------------------------------------------------------------


def to_vectors(matrix: DistributionMatrix, verbs: list[str],
               normalize: bool = DISTRIBUTION_SETTINGS["normalize_vectors"]) -> list[VerbVector]:
    """Dense vectors for *verbs* over the union of their argument types.

    Raw frequencies by default; with *normalize* each vector is divided by
    its total so components are relative frequencies.
    """
    for verb in verbs:
        _require(matrix, verb)
    vocab = tuple(sorted({arg for verb in verbs for arg in matrix.counts[verb]}))
    position = {arg: i for i, arg in enumerate(vocab)}
    vectors = []
    for verb in verbs:
        components = np.zeros(len(vocab), dtype=float)
        for arg, count in matrix.counts[verb].items():
            components[position[arg]] = count
        if normalize:
            components = components / components.sum()
        vectors.append(VerbVector(verb=verb, vocab=vocab, components=components))
    return vectors


# ---------------------------------------------------------------------------
# Triple export / import
# ---------------------------------------------------------------------------


def to_triples(matrix: DistributionMatrix) -> list[tuple[str, str, int]]:
    """Sorted ``(verb, argument, count)`` records."""
    return sorted(
        (verb, arg, count)
        for verb, args in matrix.counts.items()
        for arg, count in args.items()
        if count > 0
    )


def from_triples(rows: Iterable[tuple]) -> DistributionMatrix:
    """Rebuild the count table from ``(verb, argument, count)`` records."""
    matrix = DistributionMatrix()
    for verb, arg, count in rows:
        count = int(count)
        if count < 0:
            raise DataError(f"negative count for ({verb}, {arg}): {count}")
        if count:
            matrix.counts.setdefault(verb, Counter())[arg] += count
    return matrix
