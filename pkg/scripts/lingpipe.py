"""
Shallow linguistic pipeline -- tokens, tags, lemmas, and verb arguments.

Turns normalized article text into annotated sentences (surface token,
coarse part-of-speech, lemma) with a lexicon-and-heuristics annotator, and
extracts (verb lemma, argument lemma) pairs from them.  Externally annotated
corpora (TreeTagger / Sketch Engine vertical files) bypass the built-in
annotator through :func:`load_annotated`.

Usage::

    from scripts.lingpipe import VerbLexicon, annotate_article, extract_arguments
    lexicon = VerbLexicon.default()
    for sentence in annotate_article("a1", "The index rose 120 points.", lexicon):
        pairs = extract_arguments(sentence, lexicon)
"""

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional

from nltk.tokenize import RegexpTokenizer
from nltk.tokenize.punkt import PunktParameters, PunktSentenceTokenizer

from config.settings import (
    CLOSED_CLASS_FILE,
    NOUN_LIST_FILE,
    TAG_MAP_FILE,
    VERB_LEXICON_FILE,
)
from scripts.errors import AnnotationFormatError, ConfigError

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Tag sets
# ---------------------------------------------------------------------------

VERB = "VERB"
NOUN = "NOUN"
NUMBER = "NUMBER"
OTHER = "OTHER"
PUNCT = "PUNCT"
COARSE_TAGS = (VERB, NOUN, NUMBER, OTHER, PUNCT)

SUBJECT = "SUBJECT"
COMPLEMENT = "COMPLEMENT"

POLARITIES = ("UP", "DOWN", "OTHER")
INFLECTION_FIELDS = ("base", "third_singular", "past", "past_participle", "gerund")

# Words after which a lexicon inflection is read as a noun ("a fall",
# "its rise").
NOUN_MARKERS = frozenset({
    "a", "an", "the", "this", "these", "those", "its", "their", "his", "her",
    "our", "my", "your", "each", "every", "another", "no", "any", "some",
    "sharp", "steep", "big", "small", "slight", "modest", "strong", "further",
    "sudden", "first", "second", "third", "last", "latest", "recent",
    "biggest", "largest", "sharpest", "steepest", "daily", "weekly",
    "monthly", "annual",
})

NUMBER_WORDS = frozenset({
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
    "seventeen", "eighteen", "nineteen", "twenty", "thirty", "forty", "fifty",
    "sixty", "seventy", "eighty", "ninety", "hundred", "thousand", "million",
    "billion", "trillion", "dozen", "half",
})

COORDINATORS = frozenset({"and", "or", "but", "nor", "yet", "while", "whereas"})

_NOUN_EXCEPTIONS = {
    "indices": "index",
    "indexes": "index",
    "series": "series",
    "news": "news",
    "earnings": "earnings",
    "means": "means",
    "species": "species",
    "people": "people",
    "men": "man",
    "women": "woman",
    "data": "data",
}

# ---------------------------------------------------------------------------
# Tokenization patterns
# ---------------------------------------------------------------------------

_ABBREVIATIONS = (
    "Mr", "Mrs", "Ms", "Dr", "Prof", "Inc", "Corp", "Co", "Ltd", "Plc", "Jr",
    "Sr", "St", "vs", "etc", "Jan", "Feb", "Mar", "Apr", "Jun", "Jul", "Aug",
    "Sep", "Sept", "Oct", "Nov", "Dec",
)

# Punkt sees initialisms without their final period.
_INITIALISMS = ("u.s", "u.k", "e.g", "i.e", "a.m", "p.m")

_WORD_TOKENIZER = RegexpTokenizer(
    r"\b(?:" + "|".join(_ABBREVIATIONS) + r")\.(?!\w)"  # abbreviation keeps its period
    r"|(?:[A-Za-z]\.){2,}"                               # initialisms: U.S., e.g.
    r"|\d+(?:[.,]\d+)*%?"                                # 120, 1,200.5, 5%
    r"|[^\W\d_]+(?:['’\-][^\W\d_]+)*"               # words: blue-chip, don't
    r"|\S"                                               # any other single character
)

_NUMERAL_RE = re.compile(r"\d+(?:[.,]\d+)*%?")

_STRUCTURE_RE = re.compile(r"^<(/?)(doc|s|p)(\s[^>]*)?>$")
_DOC_ID_RE = re.compile(r'\bid="([^"]*)"')


# ---------------------------------------------------------------------------
# Dataclasses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnotatedToken:
    """One token with its coarse part-of-speech and lower-case lemma."""

    surface: str
    pos: str
    lemma: str


@dataclass(frozen=True)
class AnnotatedSentence:
    """An ordered run of annotated tokens with its provenance."""

    tokens: tuple
    article_id: str = ""
    index: int = 0


@dataclass(frozen=True)
class VerbArgPair:
    """A verb lemma paired with one of its noun arguments."""

    verb: str
    argument: str
    role: str
    article_id: str = ""
    sentence_index: int = 0


# ---------------------------------------------------------------------------
# Reference word lists
# ---------------------------------------------------------------------------


def _read_word_list(path: Path) -> frozenset:
    """Read a one-word-per-line list, skipping blanks and '#' comments."""
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


@lru_cache(maxsize=None)
def closed_class_words(path: Path = CLOSED_CLASS_FILE) -> frozenset:
    """Function words that never carry NOUN or VERB tags."""
    return _read_word_list(path)


@lru_cache(maxsize=None)
def shipped_nouns(path: Path = NOUN_LIST_FILE) -> frozenset:
    """Open-class words tagged NOUN wherever they occur."""
    return _read_word_list(path)


# ---------------------------------------------------------------------------
# Verb lexicon
# ---------------------------------------------------------------------------


@dataclass
class VerbLexicon:
    """Verb lemmas with their inflection sets and UP/DOWN polarity.

    ``entries`` maps a lemma to ``{field: form}`` over
    :data:`INFLECTION_FIELDS`; ``polarity`` maps a lemma to one of
    :data:`POLARITIES`.  Inflection sets must be disjoint across lemmas.
    """

    entries: dict = field(default_factory=dict)
    polarity: dict = field(default_factory=dict)
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        for lemma, forms in self.entries.items():
            if self.polarity.get(lemma, "OTHER") not in POLARITIES:
                raise ConfigError(
                    "lexicon.polarity",
                    f"{lemma!r} has polarity {self.polarity[lemma]!r}, expected one of {POLARITIES}",
                )
            for form in set(forms.values()) | {lemma}:
                form = form.lower()
                owner = self._index.get(form)
                if owner is not None and owner != lemma:
                    raise ConfigError(
                        "lexicon.inflections",
                        f"form {form!r} listed under both {owner!r} and {lemma!r}",
                    )
                self._index[form] = lemma

    # --- construction ------------------------------------------------------

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "VerbLexicon":
        """Build a lexicon from ``{"lemma", "polarity", <inflection fields>}`` records."""
        entries: dict = {}
        polarity: dict = {}
        for rec in records:
            lemma = str(rec.get("lemma", "")).strip().lower()
            if not lemma:
                raise ConfigError("lexicon.lemma", "every record needs a non-empty lemma")
            forms = {"base": lemma}
            for name in INFLECTION_FIELDS:
                if rec.get(name):
                    forms[name] = str(rec[name]).strip().lower()
            entries[lemma] = forms
            polarity[lemma] = str(rec.get("polarity", "OTHER")).upper()
        return cls(entries=entries, polarity=polarity)

    @classmethod
    def load(cls, path: Path) -> "VerbLexicon":
        """Load a lexicon JSON document (``{"verbs": [record, ...]}``)."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        lexicon = cls.from_records(data.get("verbs", []))
        logger.info("Loaded verb lexicon %s (%d lemmas).", path, len(lexicon.entries))
        return lexicon

    @classmethod
    def default(cls) -> "VerbLexicon":
        """The shipped UP/DOWN verb sets."""
        return cls.load(VERB_LEXICON_FILE)

    # --- queries -----------------------------------------------------------

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def lemmas(self) -> list[str]:
        """Lemmas in file order."""
        return list(self.entries)

    def lemma_for(self, form: str) -> Optional[str]:
        """Return the lemma owning inflected *form*, or ``None``."""
        return self._index.get(form.lower())

    def inflections(self, lemma: str) -> frozenset:
        return frozenset(self.entries[lemma].values())

    def by_polarity(self, polarity: str) -> list[str]:
        """Lemmas tagged with *polarity* (``ALL`` returns every lemma)."""
        if polarity.upper() == "ALL":
            return self.lemmas
        return [lem for lem in self.entries if self.polarity.get(lem) == polarity.upper()]

    def subset(self, lemmas: Iterable[str]) -> "VerbLexicon":
        keep = [lem for lem in lemmas if lem in self.entries]
        return VerbLexicon(
            entries={lem: dict(self.entries[lem]) for lem in keep},
            polarity={lem: self.polarity.get(lem, "OTHER") for lem in keep},
        )

    def to_records(self) -> list[dict]:
        return [
            {"lemma": lem, "polarity": self.polarity.get(lem, "OTHER"), **forms}
            for lem, forms in self.entries.items()
        ]


# ---------------------------------------------------------------------------
# Tokenization
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _sentence_splitter() -> PunktSentenceTokenizer:
    """Untrained Punkt splitter that knows the shipped abbreviations."""
    params = PunktParameters()
    params.abbrev_types = {a.lower() for a in _ABBREVIATIONS} | set(_INITIALISMS)
    return PunktSentenceTokenizer(params)


def tokenize(text: str) -> list[list[str]]:
    """Split normalized *text* into sentences of surface tokens.

    Sentences end at ``.``, ``!`` or ``?``; trailing closing quotes and
    brackets stay with the sentence they close.  Known abbreviations and
    initialisms keep their period, so ``Corp.`` or ``U.S.`` never close a
    sentence; decimals stay in one token.  No non-space character is lost.
    """
    sentences = []
    for span in _sentence_splitter().tokenize(text):
        tokens = _WORD_TOKENIZER.tokenize(span)
        if tokens:
            sentences.append(tokens)
    return sentences


# ---------------------------------------------------------------------------
# Tagging & lemmatization
# ---------------------------------------------------------------------------


def _is_punct(surface: str) -> bool:
    return not any(ch.isalnum() for ch in surface)


def _is_number(surface: str) -> bool:
    return bool(_NUMERAL_RE.fullmatch(surface)) or surface.lower() in NUMBER_WORDS


def noun_lemma(surface: str) -> str:
    """Reduce a noun to its lower-case singular form by suffix rules."""
    word = surface.lower()
    if len(surface) > 1 and surface.isupper():
        return word  # acronyms: FTSE, DJI
    if word in _NOUN_EXCEPTIONS:
        return _NOUN_EXCEPTIONS[word]
    if len(word) <= 3:
        return word
    if word.endswith("ies"):
        return word[:-3] + "y"
    if word.endswith(("sses", "shes", "ches", "xes", "zes")):
        return word[:-2]
    if word.endswith(("ss", "us", "is")):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def tag_lemmatize(tokens: list[str], lexicon: VerbLexicon,
                  article_id: str = "", index: int = 0) -> AnnotatedSentence:
    """Tag and lemmatize one sentence of surface tokens.

    Lexicon inflections become VERB with their lexicon lemma unless the
    previous token is a determiner or adjectival marker, in which case they
    are read as nouns (``a fall``); a numeral does not block the verb
    reading (``FTSE 100 rose``).  Numerals are NUMBER; capitalized words,
    shipped nouns and other words after a marker or numeral are NOUN with a
    plural-stripped lemma; everything else is OTHER.  Never fails.
    """
    closed = closed_class_words()
    nouns = shipped_nouns()
    annotated: list[AnnotatedToken] = []
    prev_lower: Optional[str] = None
    prev_pos: Optional[str] = None

    for surface in tokens:
        lower = surface.lower()
        marked = prev_lower in NOUN_MARKERS
        quantified = marked or prev_pos == NUMBER
        if _is_punct(surface):
            pos, lemma = PUNCT, surface
        elif _is_number(surface):
            pos, lemma = NUMBER, lower
        elif lower in closed:
            pos, lemma = OTHER, lower
        elif lexicon.lemma_for(lower) is not None:
            if marked:
                pos, lemma = NOUN, noun_lemma(surface)
            else:
                pos, lemma = VERB, lexicon.lemma_for(lower)
        elif surface[0].isupper() or quantified or lower in nouns or noun_lemma(surface) in nouns:
            pos, lemma = NOUN, noun_lemma(surface)
        else:
            pos, lemma = OTHER, lower
        annotated.append(AnnotatedToken(surface=surface, pos=pos, lemma=lemma))
        prev_lower, prev_pos = lower, pos

    return AnnotatedSentence(tokens=tuple(annotated), article_id=article_id, index=index)


def annotate_article(article_id: str, text: str, lexicon: VerbLexicon) -> list[AnnotatedSentence]:
    """Tokenize and tag every sentence of one article."""
    return [
        tag_lemmatize(tokens, lexicon, article_id=article_id, index=i)
        for i, tokens in enumerate(tokenize(text))
    ]


def count_open_class(sentence: AnnotatedSentence) -> int:
    """Number of open-class (content) tokens in *sentence*."""
    closed = closed_class_words()
    total = 0
    for tok in sentence.tokens:
        if tok.pos in (VERB, NOUN):
            total += 1
        elif tok.pos == OTHER and tok.lemma.isalpha() and tok.lemma not in closed:
            total += 1
    return total


# ---------------------------------------------------------------------------
# Pre-annotated input
# ---------------------------------------------------------------------------


@dataclass
class TagMap:
    """Mapping from an external tagset onto the coarse tags.

    Tags already in :data:`COARSE_TAGS` map to themselves.  Unknown tags map
    to OTHER and are counted in ``unmapped``.
    """

    mapping: dict = field(default_factory=dict)
    unmapped: Counter = field(default_factory=Counter)

    @classmethod
    def load(cls, path: Path = TAG_MAP_FILE) -> "TagMap":
        """Read ``external_tag<TAB>coarse_tag`` lines ('#' comment lines skipped)."""
        mapping = {}
        for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            fields = line.split("\t")
            if line.startswith("#") and fields[0] != "#":
                continue
            if len(fields) != 2 or fields[1].strip() not in COARSE_TAGS:
                raise ConfigError("tag_map", f"{path}:{line_no}: expected '<tag>\\t<one of {COARSE_TAGS}>'")
            mapping[fields[0].strip()] = fields[1].strip()
        return cls(mapping=mapping)

    def coarse(self, tag: str) -> str:
        if tag in COARSE_TAGS:
            return tag
        if tag in self.mapping:
            return self.mapping[tag]
        self.unmapped[tag] += 1
        return OTHER


def load_annotated(rows: Iterable[str], tag_map: Optional[TagMap] = None,
                   article_id: str = "") -> list[AnnotatedSentence]:
    """Parse tab-separated ``surface, pos, lemma`` rows into sentences.

    Blank lines and ``<s>``/``</s>`` tags break sentences; ``<doc id="...">``
    sets the article id for what follows.  Annotations are taken verbatim
    apart from the tag mapping and lower-casing of lemmas.
    """
    tag_map = tag_map if tag_map is not None else TagMap.load()
    sentences: list[AnnotatedSentence] = []
    current: list[AnnotatedToken] = []
    doc_id = article_id
    next_index = 0

    def flush():
        nonlocal current, next_index
        if current:
            sentences.append(AnnotatedSentence(tokens=tuple(current), article_id=doc_id, index=next_index))
            next_index += 1
            current = []

    for line_no, raw in enumerate(rows, 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            flush()
            continue
        structure = _STRUCTURE_RE.match(line.strip())
        if structure:
            flush()
            closing, name = structure.group(1), structure.group(2)
            if name == "doc" and not closing:
                id_match = _DOC_ID_RE.search(line)
                doc_id = id_match.group(1) if id_match else article_id
                next_index = 0
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        if len(fields) != 3:
            raise AnnotationFormatError(
                line_no, f"expected 3 fields (surface, pos, lemma), found {len(fields)}"
            )
        surface, tag, lemma = (f.strip() for f in fields)
        if not surface:
            raise AnnotationFormatError(line_no, "empty surface token")
        if not lemma or lemma in ("<unknown>", "@card@", "@ord@"):
            lemma = surface
        current.append(AnnotatedToken(surface=surface, pos=tag_map.coarse(tag), lemma=lemma.lower()))
    flush()

    if tag_map.unmapped:
        logger.warning(
            "Mapped %d token(s) with unknown tags to OTHER: %s",
            sum(tag_map.unmapped.values()),
            ", ".join(sorted(tag_map.unmapped)),
        )
    return sentences


def dump_annotated(sentences: Iterable[AnnotatedSentence]) -> str:
    """Write sentences in the vertical format read by :func:`load_annotated`."""
    lines: list[str] = []
    doc_id: Optional[str] = None
    for sentence in sentences:
        if sentence.article_id != doc_id:
            if doc_id is not None:
                lines.append("</doc>")
            doc_id = sentence.article_id
            lines.append(f'<doc id="{doc_id}">')
        lines.extend(f"{t.surface}\t{t.pos}\t{t.lemma}" for t in sentence.tokens)
        lines.append("")
    if doc_id is not None:
        lines.append("</doc>")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Argument extraction
# ---------------------------------------------------------------------------


def _is_clause_boundary(tok: AnnotatedToken) -> bool:
    return tok.pos == PUNCT or tok.lemma in COORDINATORS


def extract_arguments(sentence: AnnotatedSentence, lexicon: VerbLexicon) -> list[VerbArgPair]:
    """Extract SUBJECT and COMPLEMENT arguments for each lexicon verb.

    SUBJECT is the nearest NOUN left of the verb inside its clause;
    COMPLEMENT is every NOUN right of the verb up to the next clause
    boundary (punctuation or a coordinating word), numerals skipped.
    Repeated triples are all emitted.
    """
    tokens = sentence.tokens
    pairs: list[VerbArgPair] = []
    for i, tok in enumerate(tokens):
        if tok.pos != VERB or tok.lemma not in lexicon:
            continue
        for j in range(i - 1, -1, -1):
            left = tokens[j]
            if _is_clause_boundary(left):
                break
            if left.pos == NOUN:
                pairs.append(VerbArgPair(tok.lemma, left.lemma, SUBJECT,
                                         sentence.article_id, sentence.index))
                break
        for right in tokens[i + 1:]:
            if _is_clause_boundary(right):
                break
            if right.pos == NOUN:
                pairs.append(VerbArgPair(tok.lemma, right.lemma, COMPLEMENT,
                                         sentence.article_id, sentence.index))
    return pairs
