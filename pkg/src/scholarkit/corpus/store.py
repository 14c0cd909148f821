"""Embedded per-corpus key-value store for parsed papers.

One SQLite file per corpus, keyed by paper_id, value = canonical JSON.
Ingestion is single-writer per corpus; reads open their own connections
and are safe from any thread once data is committed.
"""

from __future__ import annotations

import json
import logging
import sqlite3
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from scholarkit.corpus.records import PaperRecord, RecordInvalid, canonical_json, record_from_json
from scholarkit.errors import PaperNotFound

log = logging.getLogger(__name__)

STORE_FILENAME = "store.sqlite"

_SCHEMA = """
CREATE TABLE IF NOT EXISTS papers (
    paper_id TEXT PRIMARY KEY,
    record   TEXT NOT NULL
);
"""


@dataclass
class IngestReport:
    accepted: int = 0
    rejected: int = 0
    reasons: list[str] = field(default_factory=list)


class CorpusStore:
    """Store for a single corpus, rooted at one SQLite file."""

    def __init__(self, db_path: str | Path, corpus_id: str):
        self.db_path = Path(db_path)
        self.corpus_id = corpus_id
        self._write_lock = threading.Lock()
        self._local = threading.local()
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        with self._connect() as conn:
            conn.executescript(_SCHEMA)

    def _connect(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            conn = sqlite3.connect(self.db_path)
            self._local.conn = conn
        return conn

    def close(self) -> None:
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None

    def ingest_jsonl(self, path: str | Path) -> IngestReport:
        """Load a JSONL file; invalid lines are skipped with a reason.

        Re-ingestion overwrites records by paper_id.
        """
        report = IngestReport()
        with self._write_lock:
            conn = self._connect()
            with open(path, "r", encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, start=1):
                    if not line.strip():
                        continue
                    try:
                        obj = json.loads(line)
                        record = record_from_json(obj, self.corpus_id)
                    except (json.JSONDecodeError, RecordInvalid) as exc:
                        report.rejected += 1
                        report.reasons.append(f"line {lineno}: {exc}")
                        continue
                    conn.execute(
                        "INSERT INTO papers (paper_id, record) VALUES (?, ?) "
                        "ON CONFLICT(paper_id) DO UPDATE SET record=excluded.record",
                        (record.paper_id, canonical_json(record)),
                    )
                    report.accepted += 1
            conn.commit()
        if report.rejected:
            log.warning("ingest %s: rejected %d record(s)", path, report.rejected)
        return report

    def put(self, record: PaperRecord) -> None:
        with self._write_lock:
            conn = self._connect()
            conn.execute(
                "INSERT INTO papers (paper_id, record) VALUES (?, ?) "
                "ON CONFLICT(paper_id) DO UPDATE SET record=excluded.record",
                (record.paper_id, canonical_json(record)),
            )
            conn.commit()

    def get(self, paper_id: str) -> PaperRecord:
        row = self._connect().execute("SELECT record FROM papers WHERE paper_id = ?", (paper_id,)).fetchone()
        if row is None:
            raise PaperNotFound(f"{self.corpus_id}/{paper_id}")
        return record_from_json(json.loads(row[0]), self.corpus_id)

    def get_raw(self, paper_id: str) -> str:
        """The stored canonical JSON string, without re-parsing."""
        row = self._connect().execute("SELECT record FROM papers WHERE paper_id = ?", (paper_id,)).fetchone()
        if row is None:
            raise PaperNotFound(f"{self.corpus_id}/{paper_id}")
        return row[0]

    def __contains__(self, paper_id: str) -> bool:
        row = self._connect().execute("SELECT 1 FROM papers WHERE paper_id = ?", (paper_id,)).fetchone()
        return row is not None

    def iter_records(self) -> Iterator[PaperRecord]:
        """All records in ascending paper_id order."""
        cursor = self._connect().execute("SELECT record FROM papers ORDER BY paper_id ASC")
        for (raw,) in cursor:
            yield record_from_json(json.loads(raw), self.corpus_id)

    def paper_ids(self) -> list[str]:
        cursor = self._connect().execute("SELECT paper_id FROM papers ORDER BY paper_id ASC")
        return [pid for (pid,) in cursor]

    def count(self) -> int:
        (n,) = self._connect().execute("SELECT COUNT(*) FROM papers").fetchone()
        return int(n)


def store_path(data_dir: str | Path, corpus_id: str) -> Path:
    return Path(data_dir) / corpus_id / STORE_FILENAME


def open_store(data_dir: str | Path, corpus_id: str) -> CorpusStore:
    """Open (or create) the store for a corpus under a shared data directory."""
    return CorpusStore(store_path(data_dir, corpus_id), corpus_id)
