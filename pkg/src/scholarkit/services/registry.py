"""Dynamic corpus registry with copy-on-write snapshots.

Registration validates that all three per-corpus artifacts (document
store, inverted index, embedding index) exist and agree on the record
count.  Mutations are serialized and swap in a fresh immutable snapshot;
requests keep working against the snapshot they started with, so a corpus
can be added or removed between requests without disturbing in-flight
work.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path

from scholarkit.corpus.store import CorpusStore
from scholarkit.errors import CorpusNotRegistered, RegistrationError
from scholarkit.indexing.embeddings import EmbeddingIndex
from scholarkit.indexing.inverted import InvertedIndex
from scholarkit.retrieval.pipeline import CorpusHandle


@dataclass(frozen=True)
class CorpusRegistration:
    corpus_id: str
    store: Path
    inverted: Path
    embedding: Path
    priority: int = 0  # lower wins dedup survivorship

    @classmethod
    def from_dict(cls, obj: dict, base_dir: Path | None = None) -> "CorpusRegistration":
        def resolve(raw: str) -> Path:
            p = Path(raw)
            if base_dir is not None and not p.is_absolute():
                p = base_dir / p
            return p

        return cls(
            corpus_id=str(obj["corpus_id"]),
            store=resolve(obj["store"]),
            inverted=resolve(obj["inverted"]),
            embedding=resolve(obj["embedding"]),
            priority=int(obj.get("priority", 0)),
        )


@dataclass(frozen=True)
class RegistrySnapshot:
    version: int
    handles: tuple[CorpusHandle, ...]

    def handle(self, corpus_id: str) -> CorpusHandle:
        for h in self.handles:
            if h.corpus_id == corpus_id:
                return h
        raise CorpusNotRegistered(corpus_id)

    @property
    def corpus_ids(self) -> list[str]:
        return [h.corpus_id for h in self.handles]


def open_registered_corpus(reg: CorpusRegistration) -> CorpusHandle:
    """Open and cross-check the three artifacts of one corpus."""
    if not reg.store.exists():
        raise RegistrationError(f"{reg.corpus_id}: document store missing at {reg.store}")
    try:
        inverted = InvertedIndex(reg.inverted)
    except FileNotFoundError as exc:
        raise RegistrationError(f"{reg.corpus_id}: inverted index missing: {exc}") from exc
    try:
        embedding = EmbeddingIndex.open(reg.embedding)
    except FileNotFoundError as exc:
        raise RegistrationError(f"{reg.corpus_id}: embedding index missing: {exc}") from exc

    store = CorpusStore(reg.store, reg.corpus_id)
    n_store = store.count()
    n_inverted = inverted.manifest.get("record_count")
    n_embedding = embedding.manifest.get("record_count")
    if not (n_store == n_inverted == n_embedding):
        raise RegistrationError(
            f"{reg.corpus_id}: manifest mismatch (store={n_store}, inverted={n_inverted}, embedding={n_embedding})"
        )
    return CorpusHandle(reg.corpus_id, store, inverted, embedding)


@dataclass
class _Entry:
    registration: CorpusRegistration
    handle: CorpusHandle
    sequence: int


class CorpusRegistry:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._entries: dict[str, _Entry] = {}
        self._sequence = 0
        self._version = 0
        self._snapshot = RegistrySnapshot(0, ())

    def _rebuild_snapshot(self) -> RegistrySnapshot:
        ordered = sorted(self._entries.values(), key=lambda e: (e.registration.priority, e.sequence))
        self._version += 1
        self._snapshot = RegistrySnapshot(self._version, tuple(e.handle for e in ordered))
        return self._snapshot

    def register(self, reg: CorpusRegistration) -> RegistrySnapshot:
        """Validate and activate a corpus; re-registering replaces it."""
        handle = open_registered_corpus(reg)
        with self._lock:
            self._sequence += 1
            self._entries[reg.corpus_id] = _Entry(reg, handle, self._sequence)
            return self._rebuild_snapshot()

    def deregister(self, corpus_id: str) -> RegistrySnapshot:
        with self._lock:
            if corpus_id not in self._entries:
                raise CorpusNotRegistered(corpus_id)
            del self._entries[corpus_id]
            return self._rebuild_snapshot()

    def snapshot(self) -> RegistrySnapshot:
        return self._snapshot
