"""Synthetic desk-scale corpus with planted retrieval queries.

Papers are grouped into topic clusters that share dedicated vocabulary on
top of a global filler vocabulary, so cosine ranking has real structure.
Each planted query targets one paper: a unique marker token is injected
into the target's title and first abstract sentence, the query keywords
consist of that marker (so the boolean filter identifies the target
uniquely), and the query context is a noisy copy of the target's abstract
with the marker appended.  "Hard" queries replace most context words with
a different cluster's vocabulary, which reliably pushes the target out of
the purely semantic top ranks while the keyword filter still pins it.
Ground-truth citation sentences cite exactly one paper each.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from scholarkit.corpus.store import CorpusStore
from scholarkit.evalkit.samples import EvalSample, save_samples
from scholarkit.indexing import inverted
from scholarkit.indexing.embeddings import build as build_embeddings
from scholarkit.indexing.vectors import seeded_word_vectors
from scholarkit.retrieval.pipeline import CorpusHandle, prefetch
from scholarkit.retrieval.scorer import AffinityFeaturizer, TrainConfig, featurize_example, train_scorer
from scholarkit.retrieval.types import Query, TrainingExample
from scholarkit.text import load_stopwords, tokenize

GIVEN_NAMES = ["Ada", "Ben", "Mei", "Noor", "Pavel", "Rosa", "Sam", "Tomo", "Vera", "Yuri"]
FAMILY_NAMES = [
    "Adler", "Brook", "Chen", "Diaz", "Egan", "Fadel", "Grau", "Hoang", "Ibarra", "Joshi",
    "Keller", "Lund", "Moser", "Ngata", "Osei", "Petrov", "Quine", "Rivas", "Sato", "Tan",
]


@dataclass
class SynthSpec:
    papers: int = 1000
    clusters: int = 50
    planted_queries: int = 50
    hard_queries: int = 10
    training_queries: int = 150
    noise: float = 0.3
    hard_target_share: float = 0.15
    filler_words: int = 200
    cluster_words: int = 12
    abstract_sentences: int = 4
    body_sentences: int = 6
    words_per_sentence: int = 9
    dim: int = 64
    seed: int = 0
    corpus_id: str = "synth"


@dataclass
class SynthCorpus:
    spec: SynthSpec
    records: list[dict]
    samples: list[EvalSample]
    training: list[tuple[str, str]]        # (context, positive paper_id)
    cluster_of: dict[str, int] = field(default_factory=dict)


def _paper_id(i: int) -> str:
    return f"p{i:05d}"


def generate_corpus(spec: SynthSpec) -> SynthCorpus:
    rng = np.random.default_rng(spec.seed)
    filler = [f"filler{i:03d}" for i in range(spec.filler_words)]
    cluster_vocab = [
        [f"c{c:02d}word{j:02d}" for j in range(spec.cluster_words)] for c in range(spec.clusters)
    ]

    def sentence(cluster: int, cluster_share: float = 0.6) -> str:
        words = []
        for _ in range(spec.words_per_sentence):
            pool = cluster_vocab[cluster] if rng.random() < cluster_share else filler
            words.append(pool[rng.integers(len(pool))])
        return " ".join(words).capitalize() + "."

    records = []
    cluster_of: dict[str, int] = {}
    abstracts: dict[str, list[str]] = {}
    per_cluster = max(1, spec.papers // spec.clusters)
    for i in range(spec.papers):
        cluster = min(i // per_cluster, spec.clusters - 1)
        pid = _paper_id(i)
        cluster_of[pid] = cluster
        title_words = [
            cluster_vocab[cluster][rng.integers(spec.cluster_words)] if k < 3 else filler[rng.integers(len(filler))]
            for k in range(5)
        ]
        abstract = [sentence(cluster) for _ in range(spec.abstract_sentences)]
        body = [sentence(cluster) for _ in range(spec.body_sentences)]
        given = GIVEN_NAMES[rng.integers(len(GIVEN_NAMES))]
        family = FAMILY_NAMES[rng.integers(len(FAMILY_NAMES))]
        abstracts[pid] = abstract
        records.append(
            {
                "PaperID": pid,
                "Title": " ".join(title_words).capitalize(),
                "Author": [{"GivenName": given, "FamilyName": family}],
                "Abstract": " ".join(abstract),
                "Venue": "",
                "DOI": "",
                "URL": "",
                "PublicationDate": {"Year": int(rng.integers(2015, 2024))},
                "Content": {
                    "Abstract_Parsed": _parsed(abstract),
                    "Fullbody_Parsed": _parsed(body),
                },
                "Reference": [],
            }
        )

    by_id = {r["PaperID"]: r for r in records}
    target_indices = rng.choice(spec.papers, size=spec.planted_queries, replace=False)
    hard_set = set(int(i) for i in target_indices[: spec.hard_queries])

    samples = []
    for q, idx in enumerate(int(i) for i in target_indices):
        pid = _paper_id(idx)
        record = by_id[pid]
        marker = f"plantedq{q:03d}"
        record["Title"] = f"{record['Title'].rstrip('.')} {marker}"
        first = record["Content"]["Abstract_Parsed"][0]["section_text"][0]["paragraph_text"][0]
        first["sentence_text"] = f"{first['sentence_text'].rstrip('.')} {marker}."
        record["Abstract"] = " ".join(
            s["sentence_text"]
            for s in record["Content"]["Abstract_Parsed"][0]["section_text"][0]["paragraph_text"]
        )
        abstracts[pid][0] = first["sentence_text"]

        target_cluster = cluster_of[pid]
        if idx in hard_set:
            confuser = (target_cluster + 1 + int(rng.integers(spec.clusters - 1))) % spec.clusters
            keep_prob = spec.hard_target_share
            noise_pool = cluster_vocab[confuser]
        else:
            keep_prob = 1.0 - spec.noise
            noise_pool = filler + [w for c in cluster_vocab for w in c]
        context_sentences = []
        for sent in abstracts[pid]:
            words = [
                w if rng.random() < keep_prob else noise_pool[rng.integers(len(noise_pool))]
                for w in tokenize(sent)
            ]
            context_sentences.append(" ".join(words).capitalize() + ".")
        context = " ".join(context_sentences) + f" {marker}."

        family = record["Author"][0]["FamilyName"]
        year = record["PublicationDate"]["Year"]
        body = abstracts[pid][0]
        citation = f"{family} et al. ({year}) {body[0].lower() + body[1:]}"
        samples.append(
            EvalSample(
                context=context,
                keywords=marker,
                cited_paper_id=pid,
                citation_sentence=citation,
                cited_corpus_id=spec.corpus_id,
            )
        )

    eval_targets = {s.cited_paper_id for s in samples}
    candidates = [p for p in range(spec.papers) if _paper_id(p) not in eval_targets]
    train_indices = rng.choice(len(candidates), size=min(spec.training_queries, len(candidates)), replace=False)
    training = []
    for idx in (candidates[int(i)] for i in train_indices):
        pid = _paper_id(idx)
        noise_pool = filler + [w for c in cluster_vocab for w in c]
        context_sentences = []
        for sent in abstracts[pid]:
            words = [
                w if rng.random() < (1.0 - spec.noise) else noise_pool[rng.integers(len(noise_pool))]
                for w in tokenize(sent)
            ]
            context_sentences.append(" ".join(words).capitalize() + ".")
        training.append((" ".join(context_sentences), pid))

    return SynthCorpus(spec=spec, records=records, samples=samples, training=training, cluster_of=cluster_of)


def _parsed(sentences: list[str]) -> list[dict]:
    return [
        {
            "section_id": 0,
            "section_title": "Main",
            "section_text": [
                {
                    "paragraph_id": 0,
                    "paragraph_text": [
                        {"sentence_id": i, "sentence_text": s, "cite_spans": []} for i, s in enumerate(sentences)
                    ],
                }
            ],
        }
    ]


@dataclass
class PlatformPaths:
    root: Path
    store: Path
    inverted: Path
    embedding: Path
    vectors: Path
    scorer: Path
    samples: Path
    records: Path
    config: Path


def build_platform(
    spec: SynthSpec,
    out_dir: str | Path,
    train_prefetch: int = 100,
    train_config: TrainConfig | None = None,
    stopwords_path: str | Path | None = None,
) -> PlatformPaths:
    """Materialize the full per-corpus artifact set plus a trained scorer.

    Writes records.jsonl, samples.jsonl, the three index artifacts, the
    word-vector file, scorer.json and a ready-to-use config.json.
    """
    out_dir = Path(out_dir)
    corpus_dir = out_dir / spec.corpus_id
    corpus_dir.mkdir(parents=True, exist_ok=True)
    stopwords = load_stopwords(stopwords_path)

    synth = generate_corpus(spec)
    records_path = out_dir / "records.jsonl"
    with open(records_path, "w", encoding="utf-8") as fh:
        for obj in synth.records:
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    samples_path = out_dir / "samples.jsonl"
    save_samples(samples_path, synth.samples)

    store = CorpusStore(corpus_dir / "store.sqlite", spec.corpus_id)
    report = store.ingest_jsonl(records_path)
    if report.rejected:
        raise RuntimeError(f"synthetic corpus rejected records: {report.reasons[:3]}")
    records = list(store.iter_records())

    vocab = set()
    for record in records:
        for unit in record.text_units():
            vocab.update(tokenize(unit))
    wv = seeded_word_vectors(vocab, dim=spec.dim, seed=spec.seed)
    vectors_path = out_dir / "vectors.txt"
    wv.save(vectors_path)

    inverted.build(records, stopwords, corpus_dir / "inverted")
    embedding, extras = build_embeddings(records, wv, shard_size=1000)
    embedding.save(corpus_dir / "embedding", extra_manifest=extras)

    handle = CorpusHandle(spec.corpus_id, store, inverted.InvertedIndex(corpus_dir / "inverted"), embedding)
    featurizer = AffinityFeaturizer(wv)
    meta = {r.paper_id: (r.title, " ".join(r.abstract_sentences())) for r in records}

    examples = []
    for context, positive in synth.training:
        query = Query(context=context)
        pool = [
            (spec.corpus_id, c.paper_id)
            for c in prefetch(query, handle, wv, train_prefetch)
            if c.paper_id != positive
        ]
        if not pool:
            continue
        example = TrainingExample(query=query, positive=(spec.corpus_id, positive), negative_pool=pool)
        examples.append(featurize_example(example, featurizer, lambda ref: meta[ref[1]]))

    scorer, _ = train_scorer(examples, featurizer, train_config or TrainConfig(seed=spec.seed))
    scorer_path = out_dir / "scorer.json"
    scorer.save(scorer_path)

    # Paths are written relative to the config file so the directory can move.
    config = {
        "corpora": [
            {
                "corpus_id": spec.corpus_id,
                "store": f"{spec.corpus_id}/store.sqlite",
                "inverted": f"{spec.corpus_id}/inverted",
                "embedding": f"{spec.corpus_id}/embedding",
            }
        ],
        "word_vectors": "vectors.txt",
        "scorer": "scorer.json",
        "defaults": {"np": 100, "k": 10},
        "eval": {"samples": "samples.jsonl", "out": "reports"},
    }
    config_path = out_dir / "config.json"
    config_path.write_text(json.dumps(config, indent=2), "utf-8")

    return PlatformPaths(
        root=out_dir,
        store=corpus_dir / "store.sqlite",
        inverted=corpus_dir / "inverted",
        embedding=corpus_dir / "embedding",
        vectors=vectors_path,
        scorer=scorer_path,
        samples=samples_path,
        records=records_path,
        config=config_path,
    )
