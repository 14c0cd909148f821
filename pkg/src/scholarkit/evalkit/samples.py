"""Evaluation samples: context + keywords + the truly cited paper."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from scholarkit.text import split_sentences

MAX_CONTEXT_SENTENCES = 6


@dataclass(frozen=True)
class EvalSample:
    context: str
    keywords: str
    cited_paper_id: str
    citation_sentence: str
    cited_corpus_id: str | None = None

    def __post_init__(self) -> None:
        if not self.citation_sentence.strip():
            raise ValueError("citation_sentence must be non-empty")
        if not self.cited_paper_id:
            raise ValueError("cited_paper_id must be non-empty")


def truncate_context(context: str, max_sentences: int = MAX_CONTEXT_SENTENCES) -> str:
    """Keep the last ``max_sentences`` sentences preceding the citation."""
    sentences = split_sentences(context)
    if len(sentences) <= max_sentences:
        return context.strip()
    return " ".join(sentences[-max_sentences:])


def load_samples(path: str | Path) -> list[EvalSample]:
    """JSONL of samples; contexts are truncated to the sentence window."""
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            samples.append(
                EvalSample(
                    context=truncate_context(str(obj.get("context", ""))),
                    keywords=str(obj.get("keywords", "")),
                    cited_paper_id=str(obj["cited_paper_id"]),
                    citation_sentence=str(obj["citation_sentence"]),
                    cited_corpus_id=obj.get("cited_corpus_id"),
                )
            )
    return samples


def save_samples(path: str | Path, samples: list[EvalSample]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            obj = {
                "context": s.context,
                "keywords": s.keywords,
                "cited_paper_id": s.cited_paper_id,
                "citation_sentence": s.citation_sentence,
            }
            if s.cited_corpus_id:
                obj["cited_corpus_id"] = s.cited_corpus_id
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
