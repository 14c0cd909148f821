"""On-disk inverted index: keyword -> sorted postings of paper IDs.

Layout under ``<index_dir>`` (conventionally ``<corpus_id>/inverted/``):

* ``index.sqlite``: two tables, a paper-ID dictionary assigning dense row
  numbers in ascending paper_id order, and a keyword table whose postings
  are delta-encoded varint blobs of those row numbers.  Lookups touch one
  key; the index is never loaded whole.
* ``manifest.json``: build time, stopword-list hash, record count and
  totals.
"""

from __future__ import annotations

import json
import logging
import shutil
import sqlite3
import threading
import time
from collections import defaultdict
from pathlib import Path
from typing import Iterable

from scholarkit.corpus.keywords import extract_keywords
from scholarkit.corpus.records import PaperRecord
from scholarkit.text import stopwords_digest

log = logging.getLogger(__name__)

DB_FILENAME = "index.sqlite"
MANIFEST_FILENAME = "manifest.json"

_SCHEMA = """
CREATE TABLE papers (
    row_id   INTEGER PRIMARY KEY,
    paper_id TEXT NOT NULL UNIQUE
);
CREATE TABLE postings (
    keyword  TEXT PRIMARY KEY,
    count    INTEGER NOT NULL,
    rows     BLOB NOT NULL
);
"""


def encode_postings(rows: list[int]) -> bytes:
    """Delta + varint (LEB128) encoding of a strictly increasing row list."""
    out = bytearray()
    prev = -1
    for row in rows:
        delta = row - prev
        prev = row
        while True:
            byte = delta & 0x7F
            delta >>= 7
            if delta:
                out.append(byte | 0x80)
            else:
                out.append(byte)
                break
    return bytes(out)


def decode_postings(blob: bytes) -> list[int]:
    rows = []
    value = 0
    shift = 0
    prev = -1
    for byte in blob:
        value |= (byte & 0x7F) << shift
        if byte & 0x80:
            shift += 7
        else:
            prev += value
            rows.append(prev)
            value = 0
            shift = 0
    return rows


class InvertedIndex:
    """Read handle over a built index directory."""

    def __init__(self, index_dir: str | Path):
        self.index_dir = Path(index_dir)
        db = self.index_dir / DB_FILENAME
        if not db.exists():
            raise FileNotFoundError(f"no inverted index at {self.index_dir}")
        self.manifest = json.loads((self.index_dir / MANIFEST_FILENAME).read_text("utf-8"))
        self._local = threading.local()
        self._row_to_id: list[str] | None = None
        self._dict_lock = threading.Lock()

    def _connect(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            conn = sqlite3.connect(self.index_dir / DB_FILENAME)
            self._local.conn = conn
        return conn

    def close(self) -> None:
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None

    @property
    def stats(self) -> dict[str, int]:
        return {
            "num_keywords": self.manifest["num_keywords"],
            "num_postings": self.manifest["num_postings"],
        }

    def _dictionary(self) -> list[str]:
        # One small table of N strings; postings blobs stay on disk.
        if self._row_to_id is None:
            with self._dict_lock:
                if self._row_to_id is None:
                    rows = self._connect().execute(
                        "SELECT paper_id FROM papers ORDER BY row_id ASC"
                    ).fetchall()
                    self._row_to_id = [pid for (pid,) in rows]
        return self._row_to_id

    def postings(self, keyword: str) -> list[str]:
        """Paper IDs containing the keyword, ascending; [] if unknown."""
        conn = self._connect()
        row = conn.execute("SELECT rows FROM postings WHERE keyword = ?", (keyword,)).fetchone()
        if row is None:
            return []
        dictionary = self._dictionary()
        return [dictionary[r] for r in decode_postings(row[0])]

    def posting_count(self, keyword: str) -> int:
        row = self._connect().execute("SELECT count FROM postings WHERE keyword = ?", (keyword,)).fetchone()
        return int(row[0]) if row else 0


def build(
    records: Iterable[PaperRecord],
    stopwords: frozenset[str],
    index_dir: str | Path,
) -> InvertedIndex:
    """Build the index for a corpus, replacing any previous build.

    A failed build removes its partial files before re-raising.
    """
    index_dir = Path(index_dir)
    if index_dir.exists():
        shutil.rmtree(index_dir)
    index_dir.mkdir(parents=True)
    try:
        per_paper: dict[str, set[str]] = {}
        for record in records:
            per_paper[record.paper_id] = set(extract_keywords(record, stopwords))

        paper_ids = sorted(per_paper)
        row_of = {pid: row for row, pid in enumerate(paper_ids)}
        postings: dict[str, list[int]] = defaultdict(list)
        for pid in paper_ids:
            row = row_of[pid]
            for keyword in per_paper[pid]:
                postings[keyword].append(row)

        conn = sqlite3.connect(index_dir / DB_FILENAME)
        try:
            conn.executescript(_SCHEMA)
            conn.executemany(
                "INSERT INTO papers (row_id, paper_id) VALUES (?, ?)",
                list(enumerate(paper_ids)),
            )
            num_postings = 0
            for keyword in sorted(postings):
                rows = postings[keyword]
                num_postings += len(rows)
                conn.execute(
                    "INSERT INTO postings (keyword, count, rows) VALUES (?, ?, ?)",
                    (keyword, len(rows), encode_postings(rows)),
                )
            conn.commit()
        finally:
            conn.close()

        manifest = {
            "built_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "stopwords_sha256": stopwords_digest(stopwords),
            "record_count": len(paper_ids),
            "num_keywords": len(postings),
            "num_postings": num_postings,
        }
        (index_dir / MANIFEST_FILENAME).write_text(json.dumps(manifest, indent=2), "utf-8")
    except BaseException:
        shutil.rmtree(index_dir, ignore_errors=True)
        raise
    log.info("built inverted index at %s: %d keywords", index_dir, manifest["num_keywords"])
    return InvertedIndex(index_dir)
