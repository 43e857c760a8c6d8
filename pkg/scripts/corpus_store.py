"""
SQLite article store with first-50-character deduplication.

Schema:
- **articles**: one row per unique article (``dedup_key`` is UNIQUE and acts
  as the key index), in insertion order.
- **seen_documents**: fingerprint of every distinct document ever offered and
  whether it was stored or rejected as a duplicate.  Re-offering a known
  document is a no-op, which makes ingest idempotent.
- **store_meta**: schema version and canonical encoding.

Raw documents are decoded, stripped of markup and whitespace-normalized
before keying, so the key is taken from the normalized text.
"""

import hashlib
import json
import logging
import sqlite3
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Iterator, Optional

from bs4 import BeautifulSoup

from config.settings import CORPUS_SETTINGS
from scripts.errors import ConfigError, CorpusEncodingError, DataError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
STORE_FILENAME = "articles.db"


# ---------------------------------------------------------------------------
# Dataclasses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Article:
    """One deduplicated source document with normalized text."""

    id: str
    source_label: str
    date: Optional[str]
    text: str


@dataclass(frozen=True)
class RawDocument:
    """A document offered for ingest.

    ``error`` is set by readers when the document could not even be read;
    such documents are counted as errored without being normalized.
    """

    raw: bytes
    source_label: str = ""
    date: Optional[str] = None
    origin: str = ""
    error: Optional[str] = None

    @property
    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        for part in (self.raw, self.source_label.encode("utf-8"), (self.date or "").encode("utf-8")):
            digest.update(len(part).to_bytes(8, "big"))
            digest.update(part)
        return digest.hexdigest()


@dataclass
class IngestStats:
    """Per-run counters.  ``ingested == stored + rejected + errored``."""

    ingested: int = 0
    stored: int = 0
    rejected: int = 0
    errored: int = 0
    errors: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ingested": self.ingested,
            "stored": self.stored,
            "rejected": self.rejected,
            "errored": self.errored,
            "errors": list(self.errors),
        }


# ---------------------------------------------------------------------------
# Normalization & keys
# ---------------------------------------------------------------------------


def normalize_text(raw: bytes, encoding: str = CORPUS_SETTINGS["encoding"]) -> str:
    """Decode *raw*, strip markup, resolve entities and collapse whitespace.

    Raises :class:`CorpusEncodingError` (with the byte offset) when *raw*
    does not decode, and :class:`DataError` when nothing but markup is left.
    """
    try:
        decoded = raw.decode(encoding)
    except UnicodeDecodeError as exc:
        raise CorpusEncodingError(exc.start, encoding, exc.reason) from exc
    except LookupError as exc:
        raise ConfigError("encoding", f"unknown encoding {encoding!r}") from exc

    soup = BeautifulSoup(decoded, "html.parser")
    for tag in soup(["script", "style"]):
        tag.decompose()
    text = unicodedata.normalize("NFC", soup.get_text(" "))
    text = " ".join(text.split())
    if not text:
        raise DataError("document is empty after markup stripping")
    return text


def dedup_key(text: str, length: int = CORPUS_SETTINGS["dedup_key_length"]) -> str:
    """First *length* characters of normalized *text*, case-folded."""
    return text[:length].casefold()


def article_id_for(key: str) -> str:
    """Stable article id derived from its dedup key."""
    return hashlib.sha1(key.encode("utf-8")).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Connection & schema
# ---------------------------------------------------------------------------


def store_path(workspace: Path) -> Path:
    return Path(workspace) / STORE_FILENAME


def _get_connection(db_path: Path) -> sqlite3.Connection:
    """Open (or create) the store database and return a connection."""
    db_path = Path(db_path)
    db_path.parent.mkdir(parents=True, exist_ok=True)
    conn = sqlite3.connect(str(db_path))
    conn.row_factory = sqlite3.Row
    conn.execute("PRAGMA journal_mode=WAL")
    return conn


def init_store(db_path: Path) -> None:
    """Create the schema if it does not exist."""
    conn = _get_connection(db_path)
    try:
        conn.executescript("""
            CREATE TABLE IF NOT EXISTS articles (
                seq          INTEGER PRIMARY KEY AUTOINCREMENT,
                id           TEXT NOT NULL UNIQUE,
                dedup_key    TEXT NOT NULL UNIQUE,
                source_label TEXT NOT NULL DEFAULT '',
                date         TEXT,
                text         TEXT NOT NULL
            );

            CREATE TABLE IF NOT EXISTS seen_documents (
                fingerprint TEXT PRIMARY KEY,
                dedup_key   TEXT NOT NULL,
                outcome     TEXT NOT NULL CHECK (outcome IN ('stored', 'rejected'))
            );

            CREATE TABLE IF NOT EXISTS store_meta (
                key   TEXT PRIMARY KEY,
                value TEXT NOT NULL
            );
        """)
        conn.execute(
            "INSERT OR IGNORE INTO store_meta (key, value) VALUES ('schema_version', ?)",
            (SCHEMA_VERSION,),
        )
        conn.execute(
            "INSERT OR IGNORE INTO store_meta (key, value) VALUES ('encoding', ?)",
            (CORPUS_SETTINGS["encoding"],),
        )
        conn.commit()
    finally:
        conn.close()


# ---------------------------------------------------------------------------
# Ingest
# ---------------------------------------------------------------------------


def _prepare(doc: RawDocument, encoding: str) -> tuple:
    """Normalize one document; returns ``(text, error)``."""
    if doc.error:
        return None, doc.error
    try:
        if doc.date:
            if not isinstance(doc.date, str):
                raise TypeError(f"date must be an ISO string, got {doc.date!r}")
            date.fromisoformat(doc.date)
        return normalize_text(doc.raw, encoding), None
    except (ValueError, TypeError) as exc:
        # DataError subclasses ValueError, as do bad ISO dates
        return None, str(exc)


def ingest(db_path: Path, docs: Iterable[RawDocument],
           encoding: str = CORPUS_SETTINGS["encoding"],
           workers: int = CORPUS_SETTINGS["read_workers"]) -> IngestStats:
    """Normalize, deduplicate and store *docs*.

    Documents are normalized on a thread pool; store mutation is serialized
    in stream order so the first of two duplicates wins.  Unreadable
    documents are recorded in the returned stats and skipped.
    """
    init_store(db_path)
    docs = list(docs)
    stats = IngestStats()

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        prepared = list(pool.map(lambda d: _prepare(d, encoding), docs))

    conn = _get_connection(db_path)
    try:
        for doc, (text, error) in zip(docs, prepared):
            stats.ingested += 1
            if error is not None:
                stats.errored += 1
                stats.errors.append({"origin": doc.origin, "error": error})
                logger.warning("Skipping document %s: %s", doc.origin or "<stream>", error)
                continue

            key = dedup_key(text)
            fingerprint = doc.fingerprint
            existing = conn.execute(
                "SELECT id FROM articles WHERE dedup_key = ?", (key,)
            ).fetchone()
            if existing is not None:
                stats.rejected += 1
                conn.execute(
                    "INSERT OR IGNORE INTO seen_documents (fingerprint, dedup_key, outcome) "
                    "VALUES (?, ?, 'rejected')",
                    (fingerprint, key),
                )
                logger.debug("Duplicate of article %s: %s", existing["id"], doc.origin)
                continue

            conn.execute(
                "INSERT INTO articles (id, dedup_key, source_label, date, text) VALUES (?, ?, ?, ?, ?)",
                (article_id_for(key), key, doc.source_label, doc.date, text),
            )
            conn.execute(
                "INSERT OR IGNORE INTO seen_documents (fingerprint, dedup_key, outcome) "
                "VALUES (?, ?, 'stored')",
                (fingerprint, key),
            )
            stats.stored += 1
        conn.commit()
    finally:
        conn.close()

    logger.info(
        "Ingest: %d offered, %d stored, %d rejected as duplicates, %d errored.",
        stats.ingested, stats.stored, stats.rejected, stats.errored,
    )
    return stats


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def _row_to_article(row: sqlite3.Row) -> Article:
    return Article(id=row["id"], source_label=row["source_label"], date=row["date"], text=row["text"])


def list_articles(db_path: Path) -> list[Article]:
    """All stored articles ordered by id."""
    if not Path(db_path).exists():
        return []
    conn = _get_connection(db_path)
    try:
        rows = conn.execute("SELECT * FROM articles ORDER BY id").fetchall()
        return [_row_to_article(r) for r in rows]
    finally:
        conn.close()


def get_article(article_id: str, db_path: Path) -> Optional[Article]:
    conn = _get_connection(db_path)
    try:
        row = conn.execute("SELECT * FROM articles WHERE id = ?", (article_id,)).fetchone()
        return _row_to_article(row) if row else None
    finally:
        conn.close()


def store_counts(db_path: Path) -> dict:
    """Store-level counters: ``ingested == articles + rejected``.

    Counted over distinct documents, so repeated ingests of the same stream
    leave them unchanged.
    """
    if not Path(db_path).exists():
        return {"ingested": 0, "articles": 0, "rejected": 0}
    conn = _get_connection(db_path)
    try:
        articles = conn.execute("SELECT COUNT(*) FROM articles").fetchone()[0]
        rejected = conn.execute(
            "SELECT COUNT(*) FROM seen_documents WHERE outcome = 'rejected'"
        ).fetchone()[0]
        return {"ingested": articles + rejected, "articles": articles, "rejected": rejected}
    finally:
        conn.close()


def dedup_index(db_path: Path) -> dict:
    """Map of dedup key to article id."""
    if not Path(db_path).exists():
        return {}
    conn = _get_connection(db_path)
    try:
        return {r["dedup_key"]: r["id"] for r in conn.execute("SELECT dedup_key, id FROM articles")}
    finally:
        conn.close()


# ---------------------------------------------------------------------------
# Readers
# ---------------------------------------------------------------------------


def read_raw_directory(directory: Path,
                       suffixes: Iterable[str] = CORPUS_SETTINGS["raw_suffixes"]) -> list[RawDocument]:
    """Read every plain-text/HTML file under *directory* in sorted order."""
    suffixes = {s.lower() for s in suffixes}
    docs = []
    for path in sorted(p for p in Path(directory).rglob("*") if p.is_file()):
        if path.suffix.lower() not in suffixes:
            continue
        origin = str(path.relative_to(directory))
        try:
            docs.append(RawDocument(raw=path.read_bytes(), origin=origin))
        except OSError as exc:
            docs.append(RawDocument(raw=b"", origin=origin, error=f"unreadable file: {exc}"))
    logger.info("Found %d raw document(s) in %s", len(docs), directory)
    return docs


def read_jsonl(path: Path, encoding: str = CORPUS_SETTINGS["encoding"]) -> list[RawDocument]:
    """Read line-delimited ``{text, source, date}`` records."""
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            origin = f"{Path(path).name}:{line_no}"
            try:
                record = json.loads(line)
                text = record["text"]
                if not isinstance(text, str):
                    raise TypeError("'text' must be a string")
                published = record.get("date") or None
                if published is not None and not isinstance(published, str):
                    raise TypeError("'date' must be an ISO date string")
                raw = text.encode(encoding)
            except (ValueError, KeyError, TypeError) as exc:
                docs.append(RawDocument(raw=b"", origin=origin, error=f"bad record: {exc}"))
                continue
            docs.append(RawDocument(
                raw=raw,
                source_label=str(record.get("source") or ""),
                date=published,
                origin=origin,
            ))
    return docs


def iter_documents(path: Path) -> Iterator[RawDocument]:
    """Dispatch on *path*: a directory of files or a ``.jsonl`` record file."""
    path = Path(path)
    if path.is_dir():
        yield from read_raw_directory(path)
    elif path.is_file():
        yield from read_jsonl(path)
    else:
        raise ConfigError("input", f"corpus path {path} does not exist")
