"""Document-embedding index with exact sharded top-K cosine search.

The matrix holds one unit-norm float32 row per document, so cosine
similarity is a dot product.  Search scores each shard independently
(shards may be evaluated in parallel; they share no mutable state), then
merges per-shard winners.  Scores are compared in float64 and ties break
by ascending row index, which makes the sharded result identical to a
single exhaustive scan.

Layout under ``<index_dir>`` (conventionally ``<corpus_id>/embedding/``):
``matrix.bin`` (row-major float32, little-endian), ``rows.tsv``
(``<row>\\t<paper_id>``) and ``manifest.json``.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from scholarkit.corpus.records import PaperRecord
from scholarkit.errors import EmptyEmbedding, InvalidK, ZeroVector
from scholarkit.indexing.vectors import WordVectors, embed_text

log = logging.getLogger(__name__)

MATRIX_FILENAME = "matrix.bin"
ROWS_FILENAME = "rows.tsv"
MANIFEST_FILENAME = "manifest.json"

DEFAULT_SHARD_SIZE = 1_000_000
EMBED_SCOPE = "title+abstract+fullbody"


def document_text(record: PaperRecord) -> str:
    return " ".join(record.text_units())


class EmbeddingIndex:
    def __init__(self, matrix: np.ndarray, paper_ids: Sequence[str], shard_size: int = DEFAULT_SHARD_SIZE):
        if matrix.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if matrix.shape[0] != len(paper_ids):
            raise ValueError("one paper_id per matrix row required")
        if shard_size < 1:
            raise ValueError("shard_size must be >= 1")
        norms = np.linalg.norm(matrix.astype(np.float64), axis=1)
        if matrix.shape[0] and not np.allclose(norms, 1.0, atol=1e-6):
            raise ValueError("matrix rows must be unit-norm")
        self.matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        self.shard_size = shard_size
        self.row_to_id = list(paper_ids)
        self.id_to_row = {pid: row for row, pid in enumerate(paper_ids)}
        if len(self.id_to_row) != len(self.row_to_id):
            raise ValueError("duplicate paper_id in embedding index")
        self.manifest: dict = {}

    def __len__(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def shards(self) -> list[tuple[int, int]]:
        """Contiguous row ranges of at most shard_size rows covering [0, N)."""
        n = len(self)
        return [(start, min(start + self.shard_size, n)) for start in range(0, n, self.shard_size)]

    def vector_for(self, paper_id: str) -> np.ndarray:
        return self.matrix[self.id_to_row[paper_id]]

    def _shard_top(self, query64: np.ndarray, start: int, end: int, k: int) -> tuple[np.ndarray, np.ndarray]:
        """(rows, scores) of the shard's top-k by (score desc, row asc)."""
        scores = self.matrix[start:end] @ query64.astype(np.float32)
        scores = scores.astype(np.float64)
        n = end - start
        if k < n:
            part = np.argpartition(-scores, k - 1)[:k]
            boundary = scores[part].min()
            candidates = np.nonzero(scores >= boundary)[0]
        else:
            candidates = np.arange(n)
        order = np.lexsort((candidates, -scores[candidates]))[:k]
        chosen = candidates[order]
        return chosen + start, scores[chosen]

    def knn(self, query: np.ndarray, k: int, max_workers: int | None = None) -> list[tuple[str, float]]:
        """Exact top-k (paper_id, cosine), descending; ties by ascending row."""
        if k < 1:
            raise InvalidK(f"k must be >= 1, got {k}")
        if len(self) == 0:
            return []
        query64 = np.asarray(query, dtype=np.float64)
        shards = self.shards()
        per_shard_k = min(k, len(self))
        if max_workers is not None and max_workers > 1 and len(shards) > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                parts = list(pool.map(lambda se: self._shard_top(query64, se[0], se[1], per_shard_k), shards))
        else:
            parts = [self._shard_top(query64, start, end, per_shard_k) for start, end in shards]
        rows = np.concatenate([p[0] for p in parts])
        scores = np.concatenate([p[1] for p in parts])
        order = np.lexsort((rows, -scores))[: min(k, len(self))]
        return [(self.row_to_id[int(rows[i])], float(scores[i])) for i in order]

    def knn_subset(self, query: np.ndarray, candidate_ids: Iterable[str], k: int) -> list[tuple[str, float]]:
        """Exact top-k restricted to the given IDs; unknown IDs are skipped."""
        if k < 1:
            raise InvalidK(f"k must be >= 1, got {k}")
        rows = []
        missing = []
        for pid in candidate_ids:
            row = self.id_to_row.get(pid)
            if row is None:
                missing.append(pid)
            else:
                rows.append(row)
        if missing:
            log.warning("knn_subset: skipped %d unknown paper ID(s): %s", len(missing), missing[:5])
        if not rows:
            return []
        rows_arr = np.array(sorted(rows), dtype=np.int64)
        scores = (self.matrix[rows_arr] @ np.asarray(query, dtype=np.float64).astype(np.float32)).astype(np.float64)
        order = np.lexsort((rows_arr, -scores))[: min(k, len(rows_arr))]
        return [(self.row_to_id[int(rows_arr[i])], float(scores[i])) for i in order]

    def save(self, index_dir: str | Path, extra_manifest: dict | None = None) -> None:
        index_dir = Path(index_dir)
        index_dir.mkdir(parents=True, exist_ok=True)
        self.matrix.astype("<f4").tofile(index_dir / MATRIX_FILENAME)
        with open(index_dir / ROWS_FILENAME, "w", encoding="utf-8") as fh:
            for row, pid in enumerate(self.row_to_id):
                fh.write(f"{row}\t{pid}\n")
        manifest = {
            "built_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "n_rows": len(self),
            "dim": self.dim,
            "shard_size": self.shard_size,
            "scope": EMBED_SCOPE,
        }
        if extra_manifest:
            manifest.update(extra_manifest)
        (index_dir / MANIFEST_FILENAME).write_text(json.dumps(manifest, indent=2), "utf-8")

    @classmethod
    def open(cls, index_dir: str | Path) -> "EmbeddingIndex":
        index_dir = Path(index_dir)
        manifest = json.loads((index_dir / MANIFEST_FILENAME).read_text("utf-8"))
        n, dim = manifest["n_rows"], manifest["dim"]
        matrix = np.fromfile(index_dir / MATRIX_FILENAME, dtype="<f4").reshape(n, dim)
        paper_ids: list[str] = [""] * n
        with open(index_dir / ROWS_FILENAME, "r", encoding="utf-8") as fh:
            for line in fh:
                row, pid = line.rstrip("\n").split("\t")
                paper_ids[int(row)] = pid
        index = cls(matrix, paper_ids, shard_size=manifest.get("shard_size", DEFAULT_SHARD_SIZE))
        index.manifest = manifest
        return index


def build(
    records: Iterable[PaperRecord],
    wv: WordVectors,
    shard_size: int = DEFAULT_SHARD_SIZE,
) -> tuple[EmbeddingIndex, dict]:
    """Embed every record (title+abstract+fullbody) in ascending paper_id order.

    Documents with no embeddable text are left out of the matrix and listed
    in the returned manifest extras; searches simply never return them.
    """
    texts = sorted((r.paper_id, document_text(r)) for r in records)
    vectors = []
    paper_ids = []
    skipped = []
    for pid, text in texts:
        try:
            vectors.append(embed_text(text, wv))
        except (EmptyEmbedding, ZeroVector):
            skipped.append(pid)
            continue
        paper_ids.append(pid)
    if skipped:
        log.warning("embedding build: skipped %d document(s) with no embeddable text", len(skipped))
    matrix = np.stack(vectors) if vectors else np.zeros((0, wv.dim), dtype=np.float32)
    extras = {"record_count": len(texts), "skipped": skipped}
    return EmbeddingIndex(matrix, paper_ids, shard_size=shard_size), extras
