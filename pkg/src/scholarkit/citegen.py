"""Citation-sentence suggestion.

The model input is a single string with three labelled fields::

    keywords: <K>. context: <C>. target abstract: <A>.

(single space after each colon, literal field names, trailing periods;
empty fields leave nothing between marker and period).  This format is
versioned as ``v1`` in the HTTP contract so a fine-tuned seq2seq model can
be dropped in behind the same wire shape.

The reference generator is extractive: it picks the abstract sentence
closest (by embedding cosine) to context + keywords and prefixes an
author-year marker.  A remote generator receives the serialized input and
its reply is used verbatim; on timeout or error the baseline answers
instead and a warning is recorded.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Protocol

import httpx
import numpy as np

from scholarkit.errors import EmptyEmbedding, NoContent, ZeroVector
from scholarkit.indexing.vectors import WordVectors, embed_text
from scholarkit.text import split_sentences

log = logging.getLogger(__name__)

INPUT_FORMAT_VERSION = "v1"

_KEYWORDS_MARKER = "keywords: "
_CONTEXT_MARKER = ". context: "
_ABSTRACT_MARKER = ". target abstract: "


def serialize_input(keywords: str, context: str, abstract: str) -> str:
    return f"keywords: {keywords}. context: {context}. target abstract: {abstract}."


def parse_input(serialized: str) -> tuple[str, str, str]:
    """Invert serialize_input for field values free of the marker substrings."""
    if not serialized.startswith(_KEYWORDS_MARKER) or not serialized.endswith("."):
        raise ValueError("not a serialized generation input")
    body = serialized[len(_KEYWORDS_MARKER) : -1]
    try:
        keywords, rest = body.split(_CONTEXT_MARKER, 1)
        context, abstract = rest.split(_ABSTRACT_MARKER, 1)
    except ValueError as exc:
        raise ValueError("missing field marker") from exc
    return keywords, context, abstract


@dataclass(frozen=True)
class TargetPaper:
    paper_id: str
    title: str
    abstract: str
    first_author_family_name: str
    year: int | None
    abstract_sentences: tuple[str, ...] | None = None

    def sentences(self) -> list[str]:
        if self.abstract_sentences is not None:
            return list(self.abstract_sentences)
        return split_sentences(self.abstract)


@dataclass(frozen=True)
class GenerationRequest:
    keywords: str
    context: str
    target: TargetPaper


def citation_marker(target: TargetPaper) -> str:
    year = target.year if target.year is not None else "n.d."
    name = target.first_author_family_name or "Anonymous"
    return f"{name} et al. ({year})"


class Generator(Protocol):
    def __call__(self, request: GenerationRequest) -> str: ...


class ExtractiveCitationGenerator:
    """Pick the abstract sentence closest to context + keywords."""

    def __init__(self, wv: WordVectors):
        self.wv = wv

    def __call__(self, request: GenerationRequest) -> str:
        sentences = request.target.sentences()
        if not sentences:
            raise NoContent(f"target {request.target.paper_id} has no abstract")
        cue = f"{request.context} {request.keywords}".strip()
        best = sentences[0]
        try:
            cue_vec = embed_text(cue, self.wv)
        except (EmptyEmbedding, ZeroVector):
            cue_vec = None
        if cue_vec is not None and len(sentences) > 1:
            best_score = -np.inf
            for sent in sentences:
                try:
                    score = float(embed_text(sent, self.wv) @ cue_vec)
                except (EmptyEmbedding, ZeroVector):
                    continue
                if score > best_score:
                    best, best_score = sent, score
        body = best[0].lower() + best[1:] if best else best
        return f"{citation_marker(request.target)} {body}"


class RemoteGenerator:
    """HTTP client for a drop-in generation model.

    Contract (``v1``): POST ``{"input": <serialized string>}``, response
    ``{"sentence": <string>}``.
    """

    def __init__(self, url: str, timeout: float = 10.0):
        self.url = url
        self.timeout = timeout

    def __call__(self, request: GenerationRequest) -> str:
        payload = {"input": serialize_input(request.keywords, request.context, request.target.abstract)}
        response = httpx.post(self.url, json=payload, timeout=self.timeout)
        response.raise_for_status()
        return str(response.json()["sentence"])


def suggest_citation(
    request: GenerationRequest,
    generator: Generator | None = None,
    wv: WordVectors | None = None,
    warnings: list[str] | None = None,
) -> str:
    """One suggested citation sentence for the target paper.

    ``generator`` defaults to the extractive baseline over ``wv``.  When a
    remote generator fails, the baseline answers and a warning is appended
    to ``warnings`` (if provided).
    """
    if generator is None:
        if wv is None:
            raise ValueError("need a generator or word vectors for the baseline")
        generator = ExtractiveCitationGenerator(wv)
        return generator(request)
    try:
        return generator(request)
    except NoContent:
        raise
    except Exception as exc:
        log.warning("generator failed (%s); falling back to extractive baseline", exc)
        if warnings is not None:
            warnings.append(f"generator failed: {exc}; used extractive baseline")
        if wv is None:
            raise
        return ExtractiveCitationGenerator(wv)(request)
