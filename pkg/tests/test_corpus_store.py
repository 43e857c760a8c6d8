"""
Tests for scripts.corpus_store -- normalization, first-50-character
deduplication, idempotent ingest and the document readers.
"""

import json
import sys
from pathlib import Path

import pytest

PROJECT_ROOT = str(Path(__file__).resolve().parent.parent)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from scripts.corpus_store import (
    RawDocument,
    dedup_index,
    dedup_key,
    get_article,
    ingest,
    init_store,
    iter_documents,
    list_articles,
    normalize_text,
    read_jsonl,
    store_counts,
)
from scripts.errors import ConfigError, CorpusEncodingError, DataError


@pytest.fixture
def db(tmp_path):
    """Create an isolated store and return its path."""
    db_path = tmp_path / "articles.db"
    init_store(db_path)
    return db_path


def _doc(text, **kwargs):
    return RawDocument(raw=text.encode("utf-8"), **kwargs)


# ---------------------------------------------------------------------------
# Schema
# ---------------------------------------------------------------------------

class TestInitStore:
    def test_creates_database_file(self, tmp_path):
        db_path = tmp_path / "new.db"
        assert not db_path.exists()
        init_store(db_path)
        assert db_path.exists()

    def test_idempotent(self, db):
        init_store(db)
        assert store_counts(db) == {"ingested": 0, "articles": 0, "rejected": 0}


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

class TestNormalizeText:
    def test_markup_and_whitespace(self):
        raw = b"<html><body><p>Gold   rose\n\n&amp; silver</p><script>x=1</script></body></html>"
        assert normalize_text(raw) == "Gold rose & silver"

    def test_bad_bytes_report_offset(self):
        with pytest.raises(CorpusEncodingError) as exc_info:
            normalize_text(b"abc\xffdef")
        assert exc_info.value.offset == 3
        assert exc_info.value.encoding == "utf-8"

    def test_markup_only_document_is_empty(self):
        with pytest.raises(DataError):
            normalize_text(b"<html><body>  </body></html>")

    def test_unknown_encoding(self):
        with pytest.raises(ConfigError):
            normalize_text(b"text", encoding="no-such-codec")

    def test_key_is_first_fifty_characters(self):
        text = "x" * 60
        assert dedup_key(text) == "x" * 50
        assert dedup_key("Short") == "short"


# ---------------------------------------------------------------------------
# Ingest
# ---------------------------------------------------------------------------

class TestIngest:
    def test_shared_prefix_documents_collapse(self, db, corpus_dir):
        stats = ingest(db, iter_documents(corpus_dir))
        assert stats.ingested == 10
        assert stats.stored == 8
        assert stats.rejected == 2
        assert stats.errored == 0
        assert len(list_articles(db)) == 8

    def test_first_document_wins(self, db, corpus_dir):
        ingest(db, iter_documents(corpus_dir))
        texts = [a.text for a in list_articles(db)]
        first = (corpus_dir / "a00.txt").read_text(encoding="utf-8")
        assert first in texts
        assert not any("Analysts were surprised" in t for t in texts)

    def test_reingest_is_a_no_op(self, db, corpus_dir):
        ingest(db, iter_documents(corpus_dir))
        before = (list_articles(db), store_counts(db))
        ingest(db, iter_documents(corpus_dir))
        assert (list_articles(db), store_counts(db)) == before
        assert store_counts(db) == {"ingested": 10, "articles": 8, "rejected": 2}

    def test_ingest_counts_balance(self, db):
        docs = [_doc("Gold rose."), _doc("Gold rose."), RawDocument(raw=b"\xff\xfe", origin="bad.txt")]
        stats = ingest(db, docs)
        assert stats.ingested == stats.stored + stats.rejected + stats.errored
        assert (stats.stored, stats.rejected, stats.errored) == (1, 1, 1)
        assert stats.errors[0]["origin"] == "bad.txt"

    def test_bad_date_is_an_error(self, db):
        stats = ingest(db, [_doc("Gold rose.", date="2011-13-45")])
        assert stats.errored == 1
        assert list_articles(db) == []

    def test_non_string_date_does_not_abort_ingest(self, db):
        stats = ingest(db, [_doc("Gold rose.", date=20110101), _doc("Silver fell.")])
        assert (stats.stored, stats.errored) == (1, 1)
        assert "ISO" in stats.errors[0]["error"]
        assert [a.text for a in list_articles(db)] == ["Silver fell."]

    def test_metadata_is_kept(self, db):
        ingest(db, [_doc("Gold rose.", source_label="wire", date="2011-03-04")])
        (article,) = list_articles(db)
        assert article.source_label == "wire"
        assert article.date == "2011-03-04"
        assert get_article(article.id, db) == article
        assert dedup_index(db) == {"gold rose.": article.id}

    def test_ids_are_stable_across_stores(self, tmp_path, corpus_dir):
        first, second = tmp_path / "one.db", tmp_path / "two.db"
        ingest(first, iter_documents(corpus_dir), workers=1)
        ingest(second, iter_documents(corpus_dir), workers=4)
        assert [a.id for a in list_articles(first)] == [a.id for a in list_articles(second)]


# ---------------------------------------------------------------------------
# Readers
# ---------------------------------------------------------------------------

class TestReaders:
    def test_jsonl_records(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        lines = [
            json.dumps({"text": "Gold rose.", "source": "wire", "date": "2011-01-02"}),
            "",
            "{not json",
            json.dumps({"source": "wire"}),
        ]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        docs = read_jsonl(path)
        assert len(docs) == 3
        assert docs[0].raw == b"Gold rose."
        assert docs[0].source_label == "wire"
        assert docs[0].error is None
        assert docs[1].error and docs[2].error

    def test_jsonl_numeric_date_is_a_bad_record(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text(json.dumps({"text": "Gold rose.", "date": 20110101}) + "\n", encoding="utf-8")
        (doc,) = read_jsonl(path)
        assert doc.error.startswith("bad record")

    def test_directory_reader_filters_suffixes(self, tmp_path):
        (tmp_path / "a.txt").write_text("Gold rose.", encoding="utf-8")
        (tmp_path / "b.csv").write_text("x,y", encoding="utf-8")
        docs = list(iter_documents(tmp_path))
        assert [d.origin for d in docs] == ["a.txt"]

    def test_missing_path(self, tmp_path):
        with pytest.raises(ConfigError):
            list(iter_documents(tmp_path / "nope"))
