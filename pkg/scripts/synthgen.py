"""
Synthetic corpora with planted verb hierarchies.

A :class:`PlantPlan` names, for every planted verb, its role, its argument
vocabulary, an occurrence budget and a rank-frequency exponent.  The
generator spreads each budget over the vocabulary with a truncated power
law, writes one template sentence per planned (verb, argument) token and
packs the shuffled sentences into articles in the line-delimited record
format read by :mod:`scripts.corpus_store`.  The matching
:class:`PlantOracle` is derived from the plan alone.

Plan documents are YAML.  A vocabulary lists lemmas directly, or slices
of named pools of generated nouns::

    pools:
      shared: 200
    verbs:
      - verb: surge
        role: SUBORDINATE
        budget: 2000
        vocabulary:
          - {pool: shared, start: 0, stop: 40}
          - kalomi
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from config.settings import COVERAGE_THRESHOLDS, SYNTH_SETTINGS
from scripts.errors import PlanError
from scripts.lingpipe import (
    COMPLEMENT,
    COORDINATORS,
    NOUN_MARKERS,
    NUMBER_WORDS,
    SUBJECT,
    VerbLexicon,
    closed_class_words,
    noun_lemma,
)

logger = logging.getLogger(__name__)

SUPER = "SUPER"
SUBORDINATE = "SUBORDINATE"
SIBLING = "SIBLING"
OUTLIER = "OUTLIER"
ROLES = (SUPER, SUBORDINATE, SIBLING, OUTLIER)

_CONSONANTS = "bdfgklmnprtvz"
_VOWELS = "aeiou"
_SYLLABLES = [c + v for c in _CONSONANTS for v in _VOWELS]

_SUBJECT_TEMPLATE = "The {arg} {verb} sharply"
_COMPLEMENT_TEMPLATE = "It {verb} by {number} {arg}"
_CLAUSE_NOISE = ", while traders watched the {noun}"
_DISTRACTORS = (
    "Analysts said the {noun} was steady.",
    "Traders watched the {noun} closely.",
    "Volumes stayed near {number} million.",
)
_DISTRACTOR_NOUNS = ("market", "session", "outlook", "forecast", "calendar")

# Roles assigned to lexicon verbs by study_plan(), per polarity.
STUDY_ROLES = {
    "UP": {
        SUPER: ["rise"],
        SUBORDINATE: ["surge", "soar", "jump", "advance", "climb", "rebound"],
        SIBLING: ["rally", "gain", "increase", "recover"],
        OUTLIER: ["elevate", "alleviate"],
    },
    "DOWN": {
        SUPER: ["fall"],
        SUBORDINATE: ["sink", "tumble", "slide", "slip", "dip", "drop",
                      "plunge", "plummet", "retreat", "ease"],
        SIBLING: ["decline", "lose"],
        OUTLIER: ["worsen", "decrease"],
    },
}


def synthetic_noun(index: int) -> str:
    """Three consonant-vowel syllables, e.g. ``bababa`` for index 0."""
    if not 0 <= index < len(_SYLLABLES) ** 3:
        raise PlanError("pools", f"noun index {index} out of range")
    parts = []
    for _ in range(3):
        index, r = divmod(index, len(_SYLLABLES))
        parts.append(_SYLLABLES[r])
    return "".join(reversed(parts))


# ---------------------------------------------------------------------------
# Plan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlantedVerb:
    verb: str
    role: str
    vocabulary: tuple
    budget: int
    exponent: float = 1.0


@dataclass
class PlantPlan:
    verbs: list
    seed: Optional[int] = None
    complement_fraction: float = 0.30
    noise: bool = False
    noise_rate: float = SYNTH_SETTINGS["noise_rate"]
    sentences_per_article: int = SYNTH_SETTINGS["sentences_per_article"]
    source_label: str = "synthetic"

    @classmethod
    def from_dict(cls, doc: dict) -> "PlantPlan":
        """Build a plan from a plan document, resolving pool slices."""
        pools = {}
        offset = 0
        for name, size in (doc.get("pools") or {}).items():
            if not isinstance(size, int) or size < 1:
                raise PlanError("pools", f"pool {name!r} needs a positive integer size")
            pools[name] = [synthetic_noun(offset + i) for i in range(size)]
            offset += size

        verbs = []
        for rec in doc.get("verbs") or []:
            vocab = []
            for item in rec.get("vocabulary") or []:
                if isinstance(item, str):
                    vocab.append(item)
                    continue
                if item.get("pool") not in pools:
                    raise PlanError("vocabulary", f"{rec.get('verb')!r} refers to unknown pool {item.get('pool')!r}")
                vocab.extend(pools[item["pool"]][item.get("start"):item.get("stop"):item.get("step")])
            verbs.append(PlantedVerb(
                verb=str(rec.get("verb", "")),
                role=str(rec.get("role", "")).upper(),
                vocabulary=tuple(vocab),
                budget=int(rec.get("budget", 0)),
                exponent=float(rec.get("exponent", 1.0)),
            ))

        return cls(
            verbs=verbs,
            seed=doc.get("seed"),
            complement_fraction=float(doc.get("complement_fraction", 0.30)),
            noise=bool(doc.get("noise", False)),
            noise_rate=float(doc.get("noise_rate", SYNTH_SETTINGS["noise_rate"])),
            sentences_per_article=int(doc.get("sentences_per_article", SYNTH_SETTINGS["sentences_per_article"])),
            source_label=str(doc.get("source", "synthetic")),
        )

    @classmethod
    def from_yaml(cls, path: Path) -> "PlantPlan":
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh) or {}
        if not isinstance(doc, dict):
            raise PlanError("document", f"{path} does not hold a mapping")
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "complement_fraction": self.complement_fraction,
            "noise": self.noise,
            "noise_rate": self.noise_rate,
            "sentences_per_article": self.sentences_per_article,
            "source": self.source_label,
            "verbs": [
                {"verb": v.verb, "role": v.role, "budget": v.budget,
                 "exponent": v.exponent, "vocabulary": list(v.vocabulary)}
                for v in self.verbs
            ],
        }

    def by_role(self, role: str) -> list:
        return [v for v in self.verbs if v.role == role]


def _check_argument(lemma: str, lexicon: VerbLexicon) -> Optional[str]:
    """Reason *lemma* would not come back out of extraction unchanged, or None."""
    if not lemma or not lemma.isalpha() or lemma != lemma.lower():
        return "must be a lower-case alphabetic word"
    if noun_lemma(lemma) != lemma:
        return "is not its own noun lemma"
    if lemma in closed_class_words() or lemma in NOUN_MARKERS or lemma in COORDINATORS:
        return "is a function word"
    if lemma in NUMBER_WORDS:
        return "is a number word"
    if lexicon.lemma_for(lemma) is not None:
        return "is a verb inflection in the lexicon"
    return None


def validate_plan(plan: PlantPlan, lexicon: VerbLexicon,
                  theta_outlier: float = COVERAGE_THRESHOLDS["theta_outlier"]) -> PlantPlan:
    """Reject *plan* with the first violated constraint named."""
    if not plan.verbs:
        raise PlanError("verbs", "plan plants no verbs")
    if plan.sentences_per_article < 1:
        raise PlanError("sentences_per_article", "must be >= 1")
    if not 0.0 <= plan.noise_rate <= 1.0:
        raise PlanError("noise_rate", "must lie in [0, 1]")
    seen = set()
    for pv in plan.verbs:
        if pv.verb in seen:
            raise PlanError("verbs", f"{pv.verb!r} planted twice")
        seen.add(pv.verb)
        if pv.verb not in lexicon:
            raise PlanError("verb", f"{pv.verb!r} is not in the verb lexicon")
        if pv.role not in ROLES:
            raise PlanError("role", f"{pv.verb!r} has role {pv.role!r}, expected one of {ROLES}")
        if pv.budget < 1:
            raise PlanError("budget", f"{pv.verb!r} has budget {pv.budget}, must be >= 1")
        if pv.exponent < 0:
            raise PlanError("exponent", f"{pv.verb!r} has a negative exponent")
        if not pv.vocabulary:
            raise PlanError("vocabulary", f"{pv.verb!r} has an empty vocabulary")
        if len(set(pv.vocabulary)) != len(pv.vocabulary):
            raise PlanError("vocabulary", f"{pv.verb!r} lists a lemma twice")
        for lemma in pv.vocabulary:
            reason = _check_argument(lemma, lexicon)
            if reason:
                raise PlanError("lemma", f"argument {lemma!r} of {pv.verb!r} {reason}")

    supers = plan.by_role(SUPER)
    for sub in plan.by_role(SUBORDINATE):
        if not supers:
            raise PlanError("complement_fraction", f"subordinate {sub.verb!r} has no superordinate")
        vocab = set(sub.vocabulary)
        outside = min(len(vocab - set(s.vocabulary)) for s in supers) / len(vocab)
        if outside > plan.complement_fraction + 1e-12:
            raise PlanError(
                "complement_fraction",
                f"{outside:.4f} of {sub.verb!r}'s vocabulary lies outside its superordinate "
                f"(limit {plan.complement_fraction})",
            )

    for out in plan.by_role(OUTLIER):
        v_out = set(out.vocabulary)
        for other in plan.verbs:
            if other.verb == out.verb:
                continue
            v_other = set(other.vocabulary)
            shared = len(v_out & v_other)
            if shared / len(v_other) >= theta_outlier or shared / len(v_out) >= theta_outlier:
                raise PlanError(
                    "outlier_overlap",
                    f"outlier {out.verb!r} overlaps {other.verb!r} at or above {theta_outlier}",
                )
    return plan


# ---------------------------------------------------------------------------
# Oracle
# ---------------------------------------------------------------------------


@dataclass
class PlantOracle:
    verbs: list
    coverage: dict = field(default_factory=dict)
    roles: dict = field(default_factory=dict)
    expected_signature: tuple = ()
    pair_counts: dict = field(default_factory=dict)
    role_counts: dict = field(default_factory=dict)

    def cover(self, a: str, b: str) -> float:
        """Planned coverage of *b* by *a*."""
        return self.coverage[a][b]

    def to_dict(self) -> dict:
        return {
            "verbs": list(self.verbs),
            "coverage": self.coverage,
            "roles": dict(self.roles),
            "expected_signature": [list(g) for g in self.expected_signature],
            "pair_counts": self.pair_counts,
            "role_counts": self.role_counts,
        }


def expected_coverage(plan: PlantPlan) -> PlantOracle:
    """Coverage of every ordered verb pair from the planned vocabularies alone."""
    vocabs = {pv.verb: set(pv.vocabulary) for pv in plan.verbs}
    coverage = {
        a: {b: len(vocabs[a] & vocabs[b]) / len(vocabs[b]) for b in vocabs}
        for a in vocabs
    }
    supers = sorted(pv.verb for pv in plan.by_role(SUPER))
    rest = tuple(sorted(v for v in vocabs if v not in supers))
    groups = [(s,) for s in supers] + ([rest] if rest else [])
    signature = tuple(sorted(groups, key=lambda g: (-len(g), g[0])))
    return PlantOracle(
        verbs=[pv.verb for pv in plan.verbs],
        coverage=coverage,
        roles={pv.verb: pv.role for pv in plan.verbs},
        expected_signature=signature,
    )


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


def planned_counts(pv: PlantedVerb, rng: np.random.Generator) -> np.ndarray:
    """Spread the budget over the vocabulary by ``rank ** -exponent``.

    When the budget allows, every type gets one token before the remainder
    is sampled, so every planned type is realized.
    """
    n = len(pv.vocabulary)
    weights = np.arange(1, n + 1, dtype=float) ** -pv.exponent
    probs = weights / weights.sum()
    if pv.budget >= n:
        return np.ones(n, dtype=int) + rng.multinomial(pv.budget - n, probs)
    return rng.multinomial(pv.budget, probs)


def _sentence(verb_form: str, arg: str, role: str, rng: np.random.Generator,
              noise: bool, noise_rate: float) -> str:
    if role == SUBJECT:
        text = _SUBJECT_TEMPLATE.format(arg=arg, verb=verb_form)
    else:
        text = _COMPLEMENT_TEMPLATE.format(verb=verb_form, number=int(rng.integers(2, 500)), arg=arg)
    if noise and rng.random() < noise_rate:
        text += _CLAUSE_NOISE.format(noun=_DISTRACTOR_NOUNS[int(rng.integers(len(_DISTRACTOR_NOUNS)))])
    return text + "."


def _distractor(rng: np.random.Generator) -> str:
    template = _DISTRACTORS[int(rng.integers(len(_DISTRACTORS)))]
    return template.format(
        noun=_DISTRACTOR_NOUNS[int(rng.integers(len(_DISTRACTOR_NOUNS)))],
        number=int(rng.integers(2, 500)),
    )


def generate(plan: PlantPlan, lexicon: VerbLexicon,
             theta_outlier: float = COVERAGE_THRESHOLDS["theta_outlier"]) -> tuple[list[dict], PlantOracle]:
    """Generate corpus records and the oracle for a validated *plan*.

    Every planned (verb, argument) token becomes exactly one extractable
    pair; noise adds clauses and sentences that carry no lexicon verb.
    """
    validate_plan(plan, lexicon, theta_outlier)
    if plan.seed is None:
        raise PlanError("seed", "a seed is required for generation")
    rng = np.random.default_rng(plan.seed)
    oracle = expected_coverage(plan)

    sentences: list[str] = []
    for pv in plan.verbs:
        counts = planned_counts(pv, rng)
        forms = lexicon.entries[pv.verb]
        pair_counts: dict = {}
        roles = Counter()
        for arg, count in zip(pv.vocabulary, counts):
            if count == 0:
                continue
            pair_counts[arg] = int(count)
            n_subject = int(rng.binomial(int(count), 0.5))
            for i in range(int(count)):
                role = SUBJECT if i < n_subject else COMPLEMENT
                form = forms[("third_singular", "past")[int(rng.integers(2))]]
                sentences.append(_sentence(form, arg, role, rng, plan.noise, plan.noise_rate))
                roles[role] += 1
        oracle.pair_counts[pv.verb] = pair_counts
        oracle.role_counts[pv.verb] = dict(sorted(roles.items()))

    if plan.noise:
        n_distractors = int(round(len(sentences) * plan.noise_rate))
        sentences.extend(_distractor(rng) for _ in range(n_distractors))

    order = rng.permutation(len(sentences))
    shuffled = [sentences[i] for i in order]
    size = plan.sentences_per_article
    records = []
    for n, start in enumerate(range(0, len(shuffled), size), 1):
        body = " ".join(shuffled[start:start + size])
        records.append({"text": f"Bulletin {n:05d}. {body}", "source": plan.source_label, "date": None})

    logger.info(
        "Generated %d sentences in %d articles for %d planted verbs (seed %d, noise %s).",
        len(sentences), len(records), len(plan.verbs), plan.seed, "on" if plan.noise else "off",
    )
    return records, oracle


def write_corpus(records: list[dict], path: Path) -> Path:
    """Write records as line-delimited JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
    return path


# ---------------------------------------------------------------------------
# Study geometry
# ---------------------------------------------------------------------------


def study_plan_document(polarity: str = "UP", seed: Optional[int] = None) -> dict:
    """Plan document for the planted study geometry.

    Over a shared pool S of 200 nouns: the superordinate takes all of S;
    each subordinate takes S[0:40], a 30-noun window further along S and
    30 nouns of its own; each sibling takes S[0:40], every fourth noun of
    S[40:180] at its own offset, a 25-noun pool shared by the siblings and
    50 nouns of its own; each outlier takes two nouns of S[180:200] and 28
    of its own.
    """
    roles = STUDY_ROLES[polarity.upper()]
    subs, sibs, outs = roles[SUBORDINATE], roles[SIBLING], roles[OUTLIER]
    pools = {"shared": 200, "sibling_shared": 25}
    for verb in subs:
        pools[f"{verb}_own"] = 30
    for verb in sibs:
        pools[f"{verb}_own"] = 50
    for verb in outs:
        pools[f"{verb}_own"] = 28

    stride = (160 - 30) // max(1, len(subs) - 1)
    verbs = [{"verb": roles[SUPER][0], "role": SUPER, "budget": 20000, "exponent": 1.0,
              "vocabulary": [{"pool": "shared"}]}]
    for i, verb in enumerate(subs):
        verbs.append({"verb": verb, "role": SUBORDINATE, "budget": 2000, "exponent": 1.0, "vocabulary": [
            {"pool": "shared", "start": 0, "stop": 40},
            {"pool": "shared", "start": 40 + stride * i, "stop": 70 + stride * i},
            {"pool": f"{verb}_own"},
        ]})
    for j, verb in enumerate(sibs):
        verbs.append({"verb": verb, "role": SIBLING, "budget": 2000, "exponent": 1.0, "vocabulary": [
            {"pool": "shared", "start": 0, "stop": 40},
            {"pool": "shared", "start": 40 + j, "stop": 180, "step": 4},
            {"pool": "sibling_shared"},
            {"pool": f"{verb}_own"},
        ]})
    for j, verb in enumerate(outs):
        verbs.append({"verb": verb, "role": OUTLIER, "budget": 300, "exponent": 1.0, "vocabulary": [
            {"pool": "shared", "start": 180 + 10 * j, "stop": 182 + 10 * j},
            {"pool": f"{verb}_own"},
        ]})

    return {
        "seed": seed,
        "complement_fraction": 0.30,
        "sentences_per_article": SYNTH_SETTINGS["sentences_per_article"],
        "noise": False,
        "source": f"synthetic-{polarity.lower()}",
        "pools": pools,
        "verbs": verbs,
    }


def study_plan(polarity: str = "UP", seed: Optional[int] = None) -> PlantPlan:
    """The planted study geometry as a :class:`PlantPlan`."""
    return PlantPlan.from_dict(study_plan_document(polarity, seed))
