"""
Tests for scripts.lingpipe -- tokenization, tagging, lexicon handling,
annotated input and argument extraction.
"""

import logging
import sys
from pathlib import Path

import pytest

# Ensure the project root is importable
PROJECT_ROOT = str(Path(__file__).resolve().parent.parent)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from scripts.errors import AnnotationFormatError, ConfigError
from scripts.lingpipe import (
    COMPLEMENT,
    NOUN,
    NUMBER,
    OTHER,
    PUNCT,
    SUBJECT,
    VERB,
    AnnotatedSentence,
    AnnotatedToken,
    TagMap,
    VerbLexicon,
    annotate_article,
    count_open_class,
    dump_annotated,
    extract_arguments,
    load_annotated,
    noun_lemma,
    tag_lemmatize,
    tokenize,
)


def _pairs(text, lexicon):
    return [
        (p.verb, p.argument, p.role)
        for sentence in annotate_article("t", text, lexicon)
        for p in extract_arguments(sentence, lexicon)
    ]


# ---------------------------------------------------------------------------
# Lexicon
# ---------------------------------------------------------------------------

class TestVerbLexicon:

    def test_default_lexicon_polarities(self, lexicon):
        up = lexicon.by_polarity("UP")
        down = lexicon.by_polarity("DOWN")
        assert "rise" in up and "fall" in down
        assert not set(up) & set(down)
        assert lexicon.by_polarity("ALL") == lexicon.lemmas

    def test_inflected_form_maps_to_lemma(self, lexicon):
        assert lexicon.lemma_for("rose") == "rise"
        assert lexicon.lemma_for("Fell") == "fall"
        assert lexicon.lemma_for("market") is None

    def test_overlapping_inflections_rejected(self):
        with pytest.raises(ConfigError) as exc_info:
            VerbLexicon.from_records([
                {"lemma": "rise", "past": "rose"},
                {"lemma": "soar", "past": "rose"},
            ])
        assert exc_info.value.field == "lexicon.inflections"

    def test_unknown_polarity_rejected(self):
        with pytest.raises(ConfigError):
            VerbLexicon.from_records([{"lemma": "rise", "polarity": "SIDEWAYS"}])

    def test_records_survive_reload(self, lexicon):
        again = VerbLexicon.from_records(lexicon.to_records())
        assert again.entries == lexicon.entries
        assert again.polarity == lexicon.polarity

    def test_subset_keeps_order(self, lexicon):
        sub = lexicon.subset(["fall", "rise", "nonexistent"])
        assert sub.lemmas == ["fall", "rise"]


# ---------------------------------------------------------------------------
# Tokenization
# ---------------------------------------------------------------------------

class TestTokenize:

    def test_abbreviations_and_initialisms_keep_period(self):
        sentences = tokenize("Shares of Acme Corp. rose 5% in the U.S. market. Gold fell.")
        assert len(sentences) == 2
        assert "Corp." in sentences[0]
        assert "U.S." in sentences[0]
        assert "5%" in sentences[0]
        assert sentences[1] == ["Gold", "fell", "."]

    def test_decimal_is_one_token(self):
        (sentence,) = tokenize("The index rose 1.5 points.")
        assert "1.5" in sentence

    def test_closing_quote_stays_with_sentence(self):
        sentences = tokenize('He said "prices rose." Then they fell.')
        assert sentences[0][-1] == '"'
        assert sentences[1][0] == "Then"

    def test_empty_text(self):
        assert tokenize("") == []

    def test_no_characters_lost(self):
        text = ('Shares of Acme Corp. rose 5% (to $1,200.50) in the U.S. session. '
                '"Gold fell!" said Mr. Smith. Did oil slip? Yes.')
        sentences = tokenize(text)
        assert "".join(tok for s in sentences for tok in s) == "".join(text.split())


# ---------------------------------------------------------------------------
# Tagging & lemmatization
# ---------------------------------------------------------------------------

class TestTagLemmatize:

    def test_basic_sentence(self, lexicon):
        sentence = tag_lemmatize(["The", "FTSE", "rose", "120", "points", "."], lexicon)
        assert [t.pos for t in sentence.tokens] == [OTHER, NOUN, VERB, NUMBER, NOUN, PUNCT]
        assert [t.lemma for t in sentence.tokens] == ["the", "ftse", "rise", "120", "point", "."]

    def test_inflection_after_numeral_stays_verb(self, lexicon):
        sentence = tag_lemmatize(["The", "FTSE", "100", "rose", "20", "points", "."], lexicon)
        assert [t.pos for t in sentence.tokens] == [OTHER, NOUN, NUMBER, VERB, NUMBER, NOUN, PUNCT]
        assert sentence.tokens[3].lemma == "rise"

    def test_index_name_with_number(self, lexicon):
        (tokens,) = tokenize("S&P 500 fell sharply.")
        sentence = tag_lemmatize(tokens, lexicon)
        fell = [t for t in sentence.tokens if t.surface == "fell"][0]
        assert fell.pos == VERB
        assert fell.lemma == "fall"

    def test_inflection_after_determiner_is_noun(self, lexicon):
        sentence = tag_lemmatize(["Shares", "saw", "a", "sharp", "fall", "."], lexicon)
        fall = sentence.tokens[4]
        assert fall.pos == NOUN
        assert fall.lemma == "fall"

    def test_provenance_is_kept(self, lexicon):
        sentence = tag_lemmatize(["Gold", "fell", "."], lexicon, article_id="x", index=3)
        assert sentence.article_id == "x"
        assert sentence.index == 3

    @pytest.mark.parametrize("surface,lemma", [
        ("points", "point"),
        ("companies", "company"),
        ("boxes", "box"),
        ("indices", "index"),
        ("FTSE", "ftse"),
        ("gas", "gas"),
        ("basis", "basis"),
        ("bonus", "bonus"),
        ("glass", "glass"),
    ])
    def test_noun_lemma(self, surface, lemma):
        assert noun_lemma(surface) == lemma

    def test_open_class_count_skips_function_words(self, lexicon):
        sentence = tag_lemmatize(["The", "FTSE", "rose", "120", "points", "."], lexicon)
        # FTSE, rose, points
        assert count_open_class(sentence) == 3


# ---------------------------------------------------------------------------
# Argument extraction
# ---------------------------------------------------------------------------

class TestExtractArguments:

    def test_subject_and_complement(self, lexicon):
        pairs = _pairs("The FTSE rose 120 points and bonds fell.", lexicon)
        assert pairs == [
            ("rise", "ftse", SUBJECT),
            ("rise", "point", COMPLEMENT),
            ("fall", "bond", SUBJECT),
        ]

    def test_index_with_number_before_verb(self, lexicon):
        pairs = _pairs("The FTSE 100 rose 20 points.", lexicon)
        assert pairs == [("rise", "ftse", SUBJECT), ("rise", "point", COMPLEMENT)]

    def test_repeated_pairs_are_all_emitted(self, lexicon):
        pairs = _pairs("Gold rose. Gold rose.", lexicon)
        assert pairs == [("rise", "gold", SUBJECT), ("rise", "gold", SUBJECT)]

    def test_punctuation_bounds_the_clause(self, lexicon):
        pairs = _pairs("Traders were nervous, prices rose.", lexicon)
        assert pairs == [("rise", "price", SUBJECT)]

    def test_verb_without_arguments(self, lexicon):
        assert _pairs("It rose.", lexicon) == []

    def test_non_lexicon_verbs_ignored(self, lexicon):
        assert _pairs("Analysts said the market was steady.", lexicon) == []


# ---------------------------------------------------------------------------
# Annotated input
# ---------------------------------------------------------------------------

class TestLoadAnnotated:

    def test_vertical_file(self, annotated_file):
        with open(annotated_file, encoding="utf-8") as fh:
            sentences = load_annotated(fh)
        assert len(sentences) == 2
        first = sentences[0]
        assert first.article_id == "wire-1"
        assert [t.pos for t in first.tokens] == [OTHER, NOUN, VERB, NUMBER, NOUN, PUNCT]
        # @card@ falls back to the surface form; lemmas are lower-cased
        assert [t.lemma for t in first.tokens] == ["the", "ftse", "rise", "120", "point", "."]
        assert sentences[1].index == 1

    def test_annotated_extraction(self, annotated_file, lexicon):
        with open(annotated_file, encoding="utf-8") as fh:
            sentences = load_annotated(fh)
        pairs = [(p.verb, p.argument, p.role) for s in sentences for p in extract_arguments(s, lexicon)]
        assert pairs == [("rise", "ftse", SUBJECT), ("rise", "point", COMPLEMENT), ("fall", "gold", SUBJECT)]

    def test_malformed_row_reports_line(self):
        rows = ["Gold\tNN\tgold", "fell\tVVD"]
        with pytest.raises(AnnotationFormatError) as exc_info:
            load_annotated(rows)
        assert exc_info.value.line_number == 2

    def test_unknown_tags_map_to_other(self, caplog):
        tag_map = TagMap.load()
        with caplog.at_level(logging.WARNING):
            sentences = load_annotated(["Gold\tNN\tgold", "xyz\tZZTOP\txyz"], tag_map)
        assert sentences[0].tokens[1].pos == OTHER
        assert tag_map.unmapped["ZZTOP"] == 1
        assert "ZZTOP" in caplog.text

    def test_coarse_tags_pass_through(self):
        sentences = load_annotated(["Gold NOUN gold", "fell VERB fall"], TagMap())
        assert [t.pos for t in sentences[0].tokens] == [NOUN, VERB]

    def test_dump_is_readable_again(self):
        sentence = AnnotatedSentence(
            tokens=(AnnotatedToken("Gold", NOUN, "gold"), AnnotatedToken("fell", VERB, "fall"),
                    AnnotatedToken(".", PUNCT, ".")),
            article_id="a1",
        )
        text = dump_annotated([sentence])
        assert text.startswith('<doc id="a1">\n')
        (again,) = load_annotated(text.splitlines(), TagMap())
        assert again.tokens == sentence.tokens
        assert again.article_id == "a1"
