"""API gateway: orchestrates discovery, highlights and citation services.

The gateway owns the corpus registry and fans each search out to the
retrieval pipeline, then to the highlights and citation backends for every
result.  Backends are plain callables, so the same gateway runs fully
in-process (function dispatch) or against remote services (HTTP clients
speaking the documented contracts) without caring which.

Response schema (``v1``) for one result::

    paper_id, corpus_id, title, authors, year, abstract,
    cosine, affinity, highlights[], suggested_citation, warnings[]

Every response carries ``registry_version``, the snapshot the request ran
against.  A failing downstream degrades the affected field to null with a
warning; it never fails the whole response.
"""

from __future__ import annotations

import logging
from typing import Callable, Optional

import httpx
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from scholarkit.citegen import (
    INPUT_FORMAT_VERSION,
    GenerationRequest,
    RemoteGenerator,
    TargetPaper,
    suggest_citation,
)
from scholarkit.corpus.records import PaperRecord, record_to_json
from scholarkit.errors import CorpusNotRegistered, EmptyQuery, InvalidRange, PaperNotFound, QuerySyntaxError
from scholarkit.highlights import extract_highlights
from scholarkit.indexing.vectors import WordVectors
from scholarkit.retrieval.pipeline import RetrievalPipeline
from scholarkit.retrieval.scorer import AffinityFeaturizer, LinearScorer
from scholarkit.retrieval.types import Query
from scholarkit.services.config import ServiceConfig
from scholarkit.services.registry import CorpusRegistration, CorpusRegistry, RegistrySnapshot

log = logging.getLogger(__name__)

RESPONSE_SCHEMA_VERSION = "v1"


class BadRequest(ValueError):
    """Client error with field diagnostics."""


class NoActiveCorpus(RuntimeError):
    """Service cannot search until a corpus is registered."""


HighlightsBackend = Callable[[RegistrySnapshot, str, str], list[str]]
CiteBackend = Callable[[RegistrySnapshot, str, str, str, str], str]


class RemoteHighlightsClient:
    """POST {corpus_id, paper_id} to a highlights service; returns sentences."""

    def __init__(self, url: str, timeout: float = 10.0):
        self.url = url
        self.timeout = timeout

    def __call__(self, snapshot: RegistrySnapshot, corpus_id: str, paper_id: str) -> list[str]:
        response = httpx.post(self.url, json={"corpus_id": corpus_id, "paper_id": paper_id}, timeout=self.timeout)
        response.raise_for_status()
        return [s["text"] for s in response.json()["sentences"]]


class RemoteCiteClient:
    """POST {corpus_id, paper_id, context, keywords} to a citation service."""

    def __init__(self, url: str, timeout: float = 10.0):
        self.url = url
        self.timeout = timeout

    def __call__(self, snapshot: RegistrySnapshot, corpus_id: str, paper_id: str, context: str, keywords: str) -> str:
        payload = {"corpus_id": corpus_id, "paper_id": paper_id, "context": context, "keywords": keywords}
        response = httpx.post(self.url, json=payload, timeout=self.timeout)
        response.raise_for_status()
        return str(response.json()["sentence"])


def _authors_json(record: PaperRecord) -> list[dict[str, str]]:
    return [{"given_name": a.given_name, "family_name": a.family_name} for a in record.authors]


class Gateway:
    def __init__(
        self,
        registry: CorpusRegistry,
        wv: WordVectors,
        scorer,
        np_default: int = 100,
        k_default: int = 10,
        highlights_budget: int = 5,
        highlights_tradeoff: float = 0.6,
        highlights_backend: HighlightsBackend | None = None,
        cite_backend: CiteBackend | None = None,
        generator_url: str | None = None,
        service_timeout: float = 10.0,
    ):
        self.registry = registry
        self.wv = wv
        self.scorer = scorer
        self.np_default = np_default
        self.k_default = k_default
        self.highlights_budget = highlights_budget
        self.highlights_tradeoff = highlights_tradeoff
        self.highlights_backend = highlights_backend or self._local_highlights
        self.cite_backend = cite_backend or self._local_cite
        self.generator = RemoteGenerator(generator_url, timeout=service_timeout) if generator_url else None

    @classmethod
    def from_config(cls, config: ServiceConfig) -> "Gateway":
        if config.word_vectors is None:
            raise ValueError("config must point at a word_vectors file")
        wv = WordVectors.load(config.word_vectors)
        featurizer = AffinityFeaturizer(wv)
        if config.scorer is not None and config.scorer.exists():
            scorer = LinearScorer.load(config.scorer, featurizer)
        else:
            scorer = LinearScorer.initial(featurizer)
        registry = CorpusRegistry()
        gateway = cls(
            registry,
            wv,
            scorer,
            np_default=config.np_default,
            k_default=config.k_default,
            highlights_budget=config.highlights_budget,
            highlights_tradeoff=config.highlights_tradeoff,
            highlights_backend=(
                RemoteHighlightsClient(config.highlights_url, config.service_timeout)
                if config.highlights_url
                else None
            ),
            cite_backend=(
                RemoteCiteClient(config.cite_url, config.service_timeout) if config.cite_url else None
            ),
            generator_url=config.generator_url,
            service_timeout=config.service_timeout,
        )
        for reg in config.corpora:
            registry.register(reg)
        return gateway

    # --- local (in-process) backends ---------------------------------

    def _local_highlights(self, snapshot: RegistrySnapshot, corpus_id: str, paper_id: str) -> list[str]:
        record = snapshot.handle(corpus_id).store.get(paper_id)
        result = extract_highlights(record, self.wv, budget=self.highlights_budget, tradeoff=self.highlights_tradeoff)
        return [s.text for s in result.sentences]

    def _generation_request(self, record: PaperRecord, context: str, keywords: str) -> GenerationRequest:
        target = TargetPaper(
            paper_id=record.paper_id,
            title=record.title,
            abstract=" ".join(record.abstract_sentences()),
            first_author_family_name=record.authors[0].family_name if record.authors else "",
            year=record.publication_date.year,
            abstract_sentences=tuple(record.abstract_sentences()),
        )
        return GenerationRequest(keywords=keywords, context=context, target=target)

    def _local_cite(self, snapshot: RegistrySnapshot, corpus_id: str, paper_id: str, context: str, keywords: str) -> str:
        record = snapshot.handle(corpus_id).store.get(paper_id)
        request = self._generation_request(record, context, keywords)
        return suggest_citation(request, generator=self.generator, wv=self.wv)

    # --- operations ----------------------------------------------------

    def search(
        self,
        context: str = "",
        keywords: str = "",
        prefetch_limit: int | None = None,
        top_k: int | None = None,
        snapshot: RegistrySnapshot | None = None,
        with_highlights: bool = True,
        with_citations: bool = True,
    ) -> dict:
        snapshot = snapshot or self.registry.snapshot()
        if not snapshot.handles:
            raise NoActiveCorpus("no active corpus registered")
        if not context.strip() and not keywords.strip():
            raise BadRequest("context/keywords: at least one must be non-empty")
        budget = prefetch_limit if prefetch_limit is not None else self.np_default
        k = top_k if top_k is not None else self.k_default
        if budget < 1:
            raise BadRequest(f"np: must be >= 1, got {budget}")
        if k < 1:
            raise BadRequest(f"k: must be >= 1, got {k}")

        query = Query(context=context, keywords=keywords)
        try:
            pipeline = RetrievalPipeline(snapshot.handles, self.wv, self.scorer, candidates_per_corpus=budget)
            ranked = pipeline.search(query, top_k=k)
        except (EmptyQuery, InvalidRange, QuerySyntaxError) as exc:
            raise BadRequest(f"keywords: {exc}") from exc

        warnings: list[str] = []
        if context.strip() and ranked and all(c.cosine is None for c in ranked):
            warnings.append("no semantic ranking: context has no in-vocabulary token")

        results = []
        for cand in ranked:
            record = snapshot.handle(cand.corpus_id).store.get(cand.paper_id)
            entry_warnings: list[str] = []
            highlights = None
            if with_highlights:
                try:
                    highlights = self.highlights_backend(snapshot, cand.corpus_id, cand.paper_id)
                except Exception as exc:
                    entry_warnings.append(f"highlights unavailable: {exc}")
            suggestion = None
            if with_citations:
                try:
                    suggestion = self.cite_backend(snapshot, cand.corpus_id, cand.paper_id, context, keywords)
                except Exception as exc:
                    entry_warnings.append(f"suggested_citation unavailable: {exc}")
            results.append(
                {
                    "paper_id": cand.paper_id,
                    "corpus_id": cand.corpus_id,
                    "title": record.title,
                    "authors": _authors_json(record),
                    "year": record.publication_date.year,
                    "abstract": " ".join(record.abstract_sentences()),
                    "cosine": cand.cosine,
                    "affinity": cand.affinity,
                    "highlights": highlights,
                    "suggested_citation": suggestion,
                    "warnings": entry_warnings,
                }
            )
        return {
            "schema": RESPONSE_SCHEMA_VERSION,
            "registry_version": snapshot.version,
            "np": budget,
            "k": k,
            "results": results,
            "warnings": warnings,
        }

    def get_paper(self, corpus_id: str, paper_id: str) -> dict:
        snapshot = self.registry.snapshot()
        record = snapshot.handle(corpus_id).store.get(paper_id)
        return record_to_json(record)

    def highlights(self, corpus_id: str, paper_id: str, budget: int | None = None, tradeoff: float | None = None) -> dict:
        snapshot = self.registry.snapshot()
        record = snapshot.handle(corpus_id).store.get(paper_id)
        result = extract_highlights(
            record,
            self.wv,
            budget=budget if budget is not None else self.highlights_budget,
            tradeoff=tradeoff if tradeoff is not None else self.highlights_tradeoff,
        )
        return {
            "paper_id": paper_id,
            "corpus_id": corpus_id,
            "registry_version": snapshot.version,
            "budget": result.budget,
            "sentences": [
                {
                    "section_id": s.section_id,
                    "paragraph_id": s.paragraph_id,
                    "sentence_id": s.sentence_id,
                    "text": s.text,
                }
                for s in result.sentences
            ],
        }

    def cite(self, corpus_id: str, paper_id: str, context: str, keywords: str = "") -> dict:
        snapshot = self.registry.snapshot()
        record = snapshot.handle(corpus_id).store.get(paper_id)
        request = self._generation_request(record, context, keywords)
        warnings: list[str] = []
        sentence = suggest_citation(request, generator=self.generator, wv=self.wv, warnings=warnings)
        return {
            "sentence": sentence,
            "input_format": INPUT_FORMAT_VERSION,
            "registry_version": snapshot.version,
            "warnings": warnings,
        }

    def register(self, reg: CorpusRegistration) -> dict:
        snapshot = self.registry.register(reg)
        return {"status": "active", "corpus_id": reg.corpus_id, "registry_version": snapshot.version}

    def deregister(self, corpus_id: str) -> dict:
        snapshot = self.registry.deregister(corpus_id)
        return {"status": "removed", "corpus_id": corpus_id, "registry_version": snapshot.version}


class SearchBody(BaseModel):
    context: str = ""
    keywords: str = ""
    np: Optional[int] = None
    k: Optional[int] = None


class HighlightsBody(BaseModel):
    corpus_id: str
    paper_id: str
    budget: Optional[int] = None
    tradeoff: Optional[float] = None


class CiteBody(BaseModel):
    corpus_id: str
    paper_id: str
    context: str = ""
    keywords: str = ""


class RegistrationBody(BaseModel):
    corpus_id: str
    store: str
    inverted: str
    embedding: str
    priority: int = 0


def create_app(gateway: Gateway):
    """FastAPI wiring over a gateway; endpoints mirror the gateway methods."""
    app = FastAPI(title="scholarkit gateway", version=RESPONSE_SCHEMA_VERSION)

    @app.post("/search")
    def search(body: SearchBody):
        try:
            return gateway.search(body.context, body.keywords, prefetch_limit=body.np, top_k=body.k)
        except BadRequest as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except NoActiveCorpus as exc:
            raise HTTPException(status_code=503, detail=str(exc))

    @app.get("/papers/{corpus_id}/{paper_id}")
    def get_paper(corpus_id: str, paper_id: str):
        try:
            return gateway.get_paper(corpus_id, paper_id)
        except (CorpusNotRegistered, PaperNotFound) as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/highlights")
    def highlights(body: HighlightsBody):
        try:
            return gateway.highlights(body.corpus_id, body.paper_id, budget=body.budget, tradeoff=body.tradeoff)
        except (CorpusNotRegistered, PaperNotFound) as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/cite")
    def cite(body: CiteBody):
        try:
            return gateway.cite(body.corpus_id, body.paper_id, body.context, body.keywords)
        except (CorpusNotRegistered, PaperNotFound) as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/admin/corpora")
    def register(body: RegistrationBody):
        try:
            return gateway.register(CorpusRegistration.from_dict(body.model_dump()))
        except Exception as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.delete("/admin/corpora/{corpus_id}")
    def deregister(corpus_id: str):
        try:
            return gateway.deregister(corpus_id)
        except CorpusNotRegistered as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    return app
