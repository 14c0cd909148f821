import json

import pytest

from scholarkit.corpus.records import record_from_json
from scholarkit.corpus.store import CorpusStore
from scholarkit.indexing import inverted
from scholarkit.indexing.embeddings import build as build_embeddings
from scholarkit.indexing.vectors import seeded_word_vectors
from scholarkit.retrieval.pipeline import CorpusHandle
from scholarkit.text import load_stopwords, tokenize


def make_record_json(
    paper_id,
    title="",
    abstract_sentences=(),
    fullbody_sentences=(),
    year=None,
    month=None,
    authors=(),
    references=(),
    cite_spans_on_first_fullbody=(),
    venue="",
    doi="",
    url="",
):
    """A JSONL object in the interchange shape, with string-digit IDs."""

    def parsed(sentences, spans_for_first=()):
        if not sentences:
            return []
        return [
            {
                "section_id": "0",
                "section_title": "Main",
                "section_text": [
                    {
                        "paragraph_id": "0",
                        "paragraph_text": [
                            {
                                "sentence_id": str(i),
                                "sentence_text": s,
                                "cite_spans": list(spans_for_first) if i == 0 else [],
                            }
                            for i, s in enumerate(sentences)
                        ],
                    }
                ],
            }
        ]

    date = {}
    if year is not None:
        date["Year"] = str(year)
    if month is not None:
        date["Month"] = str(month)
    return {
        "PaperID": paper_id,
        "Title": title,
        "Author": [{"GivenName": g, "FamilyName": f} for g, f in authors],
        "Abstract": " ".join(abstract_sentences),
        "Venue": venue,
        "DOI": doi,
        "URL": url,
        "PublicationDate": date,
        "Content": {
            "Abstract": "",
            "Abstract_Parsed": parsed(abstract_sentences),
            "Fullbody": "",
            "Fullbody_Parsed": parsed(fullbody_sentences, cite_spans_on_first_fullbody),
        },
        "Reference": [
            {
                "Title": t,
                "Author": [{"GivenName": g, "FamilyName": f} for g, f in auth],
                "Venue": "",
                "PublicationDate": {"Year": str(y)} if y else {},
                "ReferenceText": txt,
            }
            for t, auth, y, txt in references
        ],
    }


SMALL_CORPUS = [
    dict(
        paper_id="p001",
        title="Gradient methods for sparse signal recovery",
        abstract_sentences=[
            "We study gradient descent for sparse recovery problems.",
            "A simple step size rule attains fast convergence.",
        ],
        fullbody_sentences=[
            "Sparse recovery arises in imaging and sensing pipelines.",
            "Our gradient scheme [3] improves on projection methods.",
            "Experiments cover synthetic and measured signals.",
        ],
        year=2020,
        authors=[("Ada", "Keller"), ("Ben", "Osei")],
        references=[("Projection methods in signal processing", [("C", "Diaz")], 2015, "1. Diaz, C. Projection methods.")],
        cite_spans_on_first_fullbody=(),
    ),
    dict(
        paper_id="p002",
        title="Deep networks for image denoising",
        abstract_sentences=[
            "Deep networks remove noise from natural images.",
            "Residual connections stabilize training at depth.",
        ],
        fullbody_sentences=[
            "Image denoising benchmarks reward structural fidelity.",
            "We train deep residual networks on paired patches.",
        ],
        year=2021,
        authors=[("Mei", "Tan")],
    ),
    dict(
        paper_id="p003",
        title="A survey of sparse coding",
        abstract_sentences=[
            "Sparse coding expresses signals with few dictionary atoms.",
            "We review dictionary learning and inference algorithms.",
        ],
        fullbody_sentences=[
            "Dictionary atoms capture recurring signal structure.",
            "Inference solves a sparse regression per signal.",
            "Applications include denoising and compression.",
        ],
        year=2022,
        authors=[("Ada", "Keller")],
    ),
]


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture()
def small_records():
    return [record_from_json(make_record_json(**spec), "demo") for spec in SMALL_CORPUS]


def write_jsonl(path, objects):
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objects:
            fh.write(json.dumps(obj) + "\n")
    return path


@pytest.fixture()
def small_store(tmp_path):
    store = CorpusStore(tmp_path / "demo" / "store.sqlite", "demo")
    jsonl = write_jsonl(tmp_path / "demo.jsonl", [make_record_json(**spec) for spec in SMALL_CORPUS])
    report = store.ingest_jsonl(jsonl)
    assert report.rejected == 0
    return store


@pytest.fixture()
def small_corpus_handle(tmp_path, small_store, stopwords):
    """Store + inverted + embedding indexes over the three-paper corpus."""
    records = list(small_store.iter_records())
    vocab = set()
    for record in records:
        for unit in record.text_units():
            vocab.update(tokenize(unit))
    wv = seeded_word_vectors(vocab, dim=32, seed=7)
    inv = inverted.build(records, stopwords, tmp_path / "demo" / "inverted")
    emb, extras = build_embeddings(records, wv, shard_size=2)
    handle = CorpusHandle("demo", small_store, inv, emb)
    return handle, wv, extras


def build_corpus_artifacts(root, corpus_id, record_objs, wv, stopwords, shard_size=1000):
    """Write store + inverted + embedding for a corpus; returns a registration."""
    from scholarkit.services.registry import CorpusRegistration

    corpus_dir = root / corpus_id
    corpus_dir.mkdir(parents=True, exist_ok=True)
    store = CorpusStore(corpus_dir / "store.sqlite", corpus_id)
    jsonl = write_jsonl(corpus_dir / "records.jsonl", record_objs)
    report = store.ingest_jsonl(jsonl)
    assert report.rejected == 0, report.reasons
    records = list(store.iter_records())
    inverted.build(records, stopwords, corpus_dir / "inverted")
    emb, extras = build_embeddings(records, wv, shard_size=shard_size)
    emb.save(corpus_dir / "embedding", extra_manifest=extras)
    store.close()
    return CorpusRegistration(
        corpus_id=corpus_id,
        store=corpus_dir / "store.sqlite",
        inverted=corpus_dir / "inverted",
        embedding=corpus_dir / "embedding",
    )


def corpus_vocab(record_objs):
    vocab = set()
    for obj in record_objs:
        record = record_from_json(obj, "tmp")
        for unit in record.text_units():
            vocab.update(tokenize(unit))
    return vocab
