"""Extractive highlights: a short ordered subset of a paper's sentences.

The reference selector is greedy relevance/redundancy selection: at each
step pick the sentence maximizing

    tradeoff * cos(sentence, document centroid)
    - (1 - tradeoff) * max cos(sentence, already selected)

and stop at the budget or when the best marginal score drops to <= 0.
Selected sentences are returned in document order and verbatim; nothing is
generated or rewritten.  Any summarizer with the same signature can be
swapped in behind the highlights service.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from scholarkit.corpus.records import PaperRecord
from scholarkit.errors import EmptyDocument, EmptyEmbedding, ZeroVector
from scholarkit.indexing.vectors import WordVectors, embed_text

DEFAULT_BUDGET = 5
DEFAULT_TRADEOFF = 0.6


@dataclass(frozen=True)
class HighlightSentence:
    section_id: int
    paragraph_id: int
    sentence_id: int
    text: str


@dataclass(frozen=True)
class HighlightSet:
    paper_id: str
    sentences: tuple[HighlightSentence, ...]
    budget: int


def _gather_sentences(record: PaperRecord) -> list[HighlightSentence]:
    part = "fullbody" if record.fullbody_parsed else "abstract"
    return [
        HighlightSentence(sec.section_id, para.paragraph_id, sent.sentence_id, sent.sentence_text)
        for sec, para, sent in record.iter_sentences(part)
    ]


def extract_highlights(
    record: PaperRecord,
    wv: WordVectors,
    budget: int = DEFAULT_BUDGET,
    tradeoff: float = DEFAULT_TRADEOFF,
) -> HighlightSet:
    """Deterministic greedy highlight selection from the full body.

    Falls back to abstract sentences when the record has no full body;
    raises EmptyDocument when there are no sentences at all.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if not 0.0 <= tradeoff <= 1.0:
        raise ValueError("tradeoff must lie in [0, 1]")
    sentences = _gather_sentences(record)
    if not sentences:
        raise EmptyDocument(record.paper_id)

    vectors: list[np.ndarray | None] = []
    for sent in sentences:
        try:
            vec = embed_text(sent.text, wv).astype(np.float64)
        except (EmptyEmbedding, ZeroVector):
            vectors.append(None)
            continue
        vectors.append(vec / np.linalg.norm(vec))
    embeddable = [i for i, v in enumerate(vectors) if v is not None]

    if not embeddable:
        # Nothing to compare; take the leading sentences.
        chosen = list(range(min(budget, len(sentences))))
        return HighlightSet(record.paper_id, tuple(sentences[i] for i in chosen), budget)

    centroid = np.mean(np.stack([vectors[i] for i in embeddable]), axis=0)
    norm = np.linalg.norm(centroid)
    if norm > 0:
        centroid = centroid / norm
    relevance = {i: float(vectors[i] @ centroid) for i in embeddable}

    selected: list[int] = []
    remaining = set(embeddable)
    # Tolerance so exact duplicates cancel despite float rounding.
    eps = 1e-12
    while remaining and len(selected) < budget:
        best_idx = None
        best_score = None
        for i in sorted(remaining):
            redundancy = max((float(vectors[i] @ vectors[j]) for j in selected), default=0.0)
            score = tradeoff * relevance[i] - (1.0 - tradeoff) * redundancy
            if best_score is None or score > best_score:
                best_idx, best_score = i, score
        if best_score is None or best_score <= eps:
            break
        selected.append(best_idx)
        remaining.discard(best_idx)

    selected.sort()
    return HighlightSet(record.paper_id, tuple(sentences[i] for i in selected), budget)
