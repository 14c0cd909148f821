"""Two-stage literature discovery.

Stage one (per corpus, parallelizable): boolean-filter the inverted index
with the keyword string, then rank the surviving IDs by cosine between
their document embeddings and the context embedding.  Without keywords the
whole corpus is ranked.  Stage two: collapse duplicates across corpora,
then rerank everything with the affinity scorer.
"""

from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from scholarkit.corpus.records import PaperRecord
from scholarkit.corpus.store import CorpusStore
from scholarkit.errors import EmptyEmbedding, ZeroVector
from scholarkit.indexing.embeddings import EmbeddingIndex
from scholarkit.indexing.inverted import InvertedIndex
from scholarkit.indexing.vectors import WordVectors, embed_text
from scholarkit.query.evaluate import evaluate
from scholarkit.query.parser import parse
from scholarkit.retrieval.types import Candidate, Query

log = logging.getLogger(__name__)

_NON_ALNUM = re.compile(r"[^a-z0-9]+")


@dataclass
class CorpusHandle:
    """Everything the pipeline needs from one registered corpus."""

    corpus_id: str
    store: CorpusStore
    inverted: InvertedIndex
    embedding: EmbeddingIndex

    def record(self, paper_id: str) -> PaperRecord:
        return self.store.get(paper_id)


def _candidate_from_record(corpus_id: str, record: PaperRecord, cosine: float | None, rank: int) -> Candidate:
    return Candidate(
        corpus_id=corpus_id,
        paper_id=record.paper_id,
        cosine=cosine,
        prefetch_rank=rank,
        title=record.title,
        author_family_names=tuple(a.family_name for a in record.authors),
        abstract=" ".join(record.abstract_sentences()),
    )


def prefetch(query: Query, corpus: CorpusHandle, wv: WordVectors, limit: int) -> list[Candidate]:
    """Up to ``limit`` candidates from one corpus.

    If the context has no usable embedding, the boolean result is returned
    in its stable (sorted) order with cosine absent.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    filtered: list[str] | None = None
    if query.keywords.strip():
        filtered = evaluate(parse(query.keywords), corpus.inverted)
        if not filtered:
            return []

    query_vec = None
    if query.context.strip():
        try:
            query_vec = embed_text(query.context, wv)
        except (EmptyEmbedding, ZeroVector) as exc:
            log.warning("context not embeddable (%s); falling back to boolean order", exc)

    if query_vec is None:
        if filtered is None:
            return []
        ranked = [(pid, None) for pid in filtered[:limit]]
    elif filtered is None:
        ranked = corpus.embedding.knn(query_vec, limit)
    else:
        ranked = corpus.embedding.knn_subset(query_vec, filtered, limit)

    return [
        _candidate_from_record(corpus.corpus_id, corpus.record(pid), cos, rank)
        for rank, (pid, cos) in enumerate(ranked)
    ]


def _dedup_key(candidate: Candidate) -> tuple[str, frozenset[str]]:
    title = _NON_ALNUM.sub(" ", candidate.title.lower()).strip()
    title = " ".join(title.split())
    authors = frozenset(name.lower() for name in candidate.author_family_names if name)
    return title, authors


def dedup(per_corpus: Sequence[list[Candidate]]) -> list[Candidate]:
    """Collapse candidates with identical normalized (title, authors) keys.

    The survivor comes from the earliest-listed corpus and keeps the best
    cosine seen for its group.  Output is ordered by cosine descending;
    candidates without a cosine keep their relative order at the end.
    """
    survivors: dict[tuple[str, frozenset[str]], Candidate] = {}
    arrival: dict[tuple[str, frozenset[str]], int] = {}
    counter = 0
    for corpus_candidates in per_corpus:
        for cand in corpus_candidates:
            key = _dedup_key(cand)
            kept = survivors.get(key)
            if kept is None:
                survivors[key] = cand
                arrival[key] = counter
                counter += 1
            elif cand.cosine is not None and (kept.cosine is None or cand.cosine > kept.cosine):
                kept.cosine = cand.cosine

    def sort_key(item: tuple[tuple[str, frozenset[str]], Candidate]):
        key, cand = item
        has_cosine = cand.cosine is not None
        return (not has_cosine, -(cand.cosine or 0.0), arrival[key])

    return [cand for _, cand in sorted(survivors.items(), key=sort_key)]


def rerank(query: Query, candidates: Sequence[Candidate], scorer) -> list[Candidate]:
    """Score every candidate and sort by affinity, ties by cosine then ID.

    A scorer failure drops the affected candidate with a warning instead of
    failing the search.
    """
    scored: list[Candidate] = []
    if hasattr(scorer, "score_many"):
        docs = [(c.title, c.abstract) for c in candidates]
        scores = scorer.score_many(query, docs)
        for cand, s in zip(candidates, scores):
            cand.affinity = float(s)
            scored.append(cand)
    else:
        for cand in candidates:
            try:
                cand.affinity = float(scorer(query.context, query.keywords, cand.title, cand.abstract))
            except Exception as exc:
                log.warning("scorer failed on %s/%s: %s; dropped", cand.corpus_id, cand.paper_id, exc)
                continue
            scored.append(cand)
    scored.sort(key=lambda c: (-c.affinity, c.cosine is None, -(c.cosine or 0.0), c.corpus_id, c.paper_id))
    for position, cand in enumerate(scored):
        cand.rank = position
    return scored


class RetrievalPipeline:
    """Prefetch from every corpus concurrently, dedup, rerank."""

    def __init__(self, corpora: Sequence[CorpusHandle], wv: WordVectors, scorer, candidates_per_corpus: int = 100):
        self.corpora = list(corpora)
        self.wv = wv
        self.scorer = scorer
        self.candidates_per_corpus = candidates_per_corpus

    def search(self, query: Query, limit: int | None = None, top_k: int | None = None) -> list[Candidate]:
        budget = limit or self.candidates_per_corpus
        if len(self.corpora) > 1:
            with ThreadPoolExecutor(max_workers=len(self.corpora)) as pool:
                per_corpus = list(pool.map(lambda c: prefetch(query, c, self.wv, budget), self.corpora))
        else:
            per_corpus = [prefetch(query, c, self.wv, budget) for c in self.corpora]
        ranked = rerank(query, dedup(per_corpus), self.scorer)
        return ranked[:top_k] if top_k else ranked
