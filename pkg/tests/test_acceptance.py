"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines alongside the measured values.
"""

import math
import random
import threading
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from scholarkit.citegen import serialize_input
from scholarkit.corpus.keywords import extract_keywords
from scholarkit.corpus.records import record_from_json
from scholarkit.evalkit.metrics import best_of_top_k, rouge_f1
from scholarkit.evalkit.suite import ARM_WITH, ARM_WITHOUT, SuiteConfig, run_suite
from scholarkit.evalkit.synth import SynthSpec, build_platform, generate_corpus
from scholarkit.indexing import inverted
from scholarkit.indexing.embeddings import EmbeddingIndex
from scholarkit.query import evaluate, parse
from scholarkit.query.optree import AND, LEAF, OR
from scholarkit.retrieval.scorer import N_FEATURES, example_loss_and_grad, softmax_rank_loss
from scholarkit.services.config import load_config
from scholarkit.services.gateway import Gateway, create_app
from scholarkit.services.registry import CorpusRegistry
from scholarkit.text import load_stopwords

PLANTED_SPEC = SynthSpec(seed=0)  # 1,000 papers, 50 planted queries


@pytest.fixture(scope="module")
def platform(tmp_path_factory):
    root = tmp_path_factory.mktemp("acceptance_platform")
    paths = build_platform(PLANTED_SPEC, root)
    gateway = Gateway.from_config(load_config(paths.config))
    return paths, gateway


@pytest.fixture(scope="module")
def planted_report(platform):
    paths, gateway = platform
    config = SuiteConfig(
        samples_path=paths.samples,
        np_values=[50, 100, 200, 300],
        k_values=[1, 5, 10, 20, 50, 100],
        generation_k=[1, 5, 10],
    )
    return run_suite(gateway, config)


def test_criterion_01_sharded_knn_equivalence():
    rng = np.random.default_rng(0)
    matrix = rng.standard_normal((10_000, 256)).astype(np.float32)
    matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
    ids = [f"p{i:05d}" for i in range(matrix.shape[0])]
    sharded = EmbeddingIndex(matrix, ids, shard_size=1_000)
    exhaustive = EmbeddingIndex(matrix, ids, shard_size=matrix.shape[0])
    assert len(sharded.shards()) == 10
    assert len(exhaustive.shards()) == 1

    query = rng.standard_normal(256)
    query /= np.linalg.norm(query)
    start = time.perf_counter()
    for k in (1, 10, 100):
        got = sharded.knn(query, k)
        expected = exhaustive.knn(query, k)
        assert [pid for pid, _ in got] == [pid for pid, _ in expected]
        np.testing.assert_allclose([s for _, s in got], [s for _, s in expected], atol=1e-6)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\n[acceptance] criterion 1 (sharded knn equals exhaustive, K in {{1,10,100}}, {elapsed:.2f}s): PASS")


def test_criterion_02_boolean_filter_equivalence(tmp_path):
    stopwords = load_stopwords()
    synth = generate_corpus(SynthSpec(papers=1000, planted_queries=5, training_queries=5, seed=11))
    records = [record_from_json(obj, "bool") for obj in synth.records]
    keyword_sets = {r.paper_id: set(extract_keywords(r, stopwords)) for r in records}
    index = inverted.build(records, stopwords, tmp_path / "inverted")

    def doc_matches(tree, keywords):
        if tree.operation == LEAF:
            return tree.keyword in keywords
        hits = (doc_matches(child, keywords) for child in tree.elements)
        return all(hits) if tree.operation == AND else any(hits)

    vocab = sorted({w for kws in keyword_sets.values() for w in kws if " " not in w and ":" not in w})
    rng = random.Random(500)

    def random_term():
        kind = rng.random()
        if kind < 0.15:
            start = rng.randint(2014, 2023)
            return f"{start}..{rng.randint(start, 2024)}"
        if kind < 0.25:
            return f"publicationdate.year:{rng.randint(2014, 2024)}"
        words = [rng.choice(vocab) if rng.random() < 0.9 else "outofvocabword" for _ in range(rng.choice([1, 1, 2, 3]))]
        return " ".join(words)

    agreements = 0
    for _ in range(500):
        query = ";".join(
            "|".join(random_term() for _ in range(rng.randint(1, 3))) for _ in range(rng.randint(1, 3))
        )
        tree = parse(query)
        expected = sorted(pid for pid, kws in keyword_sets.items() if doc_matches(tree, kws))
        if evaluate(tree, index) == expected:
            agreements += 1
    assert agreements == 500
    print(f"\n[acceptance] criterion 2 (boolean filter vs brute force, {agreements}/500 agree): PASS")


def test_criterion_03_parser_golden_tree():
    golden = {
        "operation": "AND",
        "elements": [
            {"operation": "AND", "elements": [{"operation": None, "elements": ["nlp"]}]},
            {
                "operation": "OR",
                "elements": [
                    {"operation": "AND", "elements": [{"operation": None, "elements": ["machine translation"]}]},
                    {"operation": "AND", "elements": [{"operation": None, "elements": ["nmt"]}]},
                ],
            },
            {
                "operation": "OR",
                "elements": [
                    {"operation": None, "elements": ["publicationdate.year:2020"]},
                    {"operation": None, "elements": ["publicationdate.year:2021"]},
                    {"operation": None, "elements": ["publicationdate.year:2022"]},
                ],
            },
        ],
    }
    tree = parse("NLP; machine translation|NMT; 2020..2022")
    assert tree.to_dict() == golden
    print("\n[acceptance] criterion 3 (parser golden tree, node-for-node): PASS")


def test_criterion_04_loss_and_gradient():
    loss = softmax_rank_loss(0.7, [0.7] * 10)
    assert abs(loss - math.log(11)) < 1e-12

    rng = np.random.default_rng(314)
    h = 1e-6
    worst = 0.0
    for _ in range(100):
        w = rng.normal(size=N_FEATURES)
        b = float(rng.normal())
        pos = rng.normal(size=N_FEATURES)
        neg = rng.normal(size=(10, N_FEATURES))
        _, grad_w, grad_b = example_loss_and_grad(w, b, pos, neg)
        analytic = np.append(grad_w, grad_b)
        numeric = np.empty(N_FEATURES + 1)
        for j in range(N_FEATURES):
            w_hi, w_lo = w.copy(), w.copy()
            w_hi[j] += h
            w_lo[j] -= h
            numeric[j] = (
                example_loss_and_grad(w_hi, b, pos, neg)[0] - example_loss_and_grad(w_lo, b, pos, neg)[0]
            ) / (2 * h)
        numeric[-1] = (
            example_loss_and_grad(w, b + h, pos, neg)[0] - example_loss_and_grad(w, b - h, pos, neg)[0]
        ) / (2 * h)
        rel = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)
        worst = max(worst, rel)
        assert rel < 1e-5
    print(f"\n[acceptance] criterion 4 (loss=ln(11) at 1e-12; gradient FD rel err <= {worst:.2e} over 100 points): PASS")


def test_criterion_05_planted_retrieval_with_keyword_ablation(planted_report):
    with_kw = planted_report["recall_grid"][ARM_WITH][100][10]
    without_kw = planted_report["recall_grid"][ARM_WITHOUT][100][10]
    assert planted_report["sample_count"] == 50
    assert with_kw >= 0.90
    assert without_kw < with_kw
    print(
        f"\n[acceptance] criterion 5 (planted top-10 recall: with keywords {with_kw:.2f} >= 0.90, "
        f"without {without_kw:.2f} strictly lower): PASS"
    )


def test_criterion_06_budget_sweep_non_decreasing(planted_report):
    for arm in (ARM_WITH, ARM_WITHOUT):
        sweep = [planted_report["np_sweep"][arm][b] for b in (50, 100, 200, 300)]
        assert all(b >= a for a, b in zip(sweep, sweep[1:])), sweep
    without_sweep = [round(planted_report["np_sweep"][ARM_WITHOUT][b], 3) for b in (50, 100, 200, 300)]
    print(f"\n[acceptance] criterion 6 (recall at cutoff=budget non-decreasing, keywordless arm {without_sweep}): PASS")


def test_criterion_07_rouge_correctness(planted_report):
    assert rouge_f1("the cat sat", "the cat", "1") == pytest.approx(0.8, abs=1e-12)
    for variant in ("1", "2", "L"):
        assert rouge_f1("identical sentence tokens", "identical sentence tokens", variant) == 1.0
        assert rouge_f1("alpha beta", "gamma delta", variant) == 0.0
        assert rouge_f1("", "", variant) == 0.0
    reference = "the cat sat on the mat"
    sentences = ["dogs bark", "the cat sat", "the cat sat on the mat", "unrelated"]
    previous = {v: 0.0 for v in ("1", "2", "L")}
    for k in range(1, len(sentences) + 1):
        scores = best_of_top_k(sentences[:k], reference)
        for variant in ("1", "2", "L"):
            assert scores[variant] >= previous[variant]
        previous = scores
    assert not any("best-of-top-k" in f for f in planted_report["property_failures"])
    print("\n[acceptance] criterion 7 (hand-computed rouge values; best-of-top-k monotone on every sample): PASS")


def test_criterion_08_serialization_golden():
    assert (
        serialize_input("MAX pooling", "it performs worse than expected", "We propose a pooling method")
        == "keywords: MAX pooling. context: it performs worse than expected. target abstract: We propose a pooling method."
    )
    assert serialize_input("", "", "") == "keywords: . context: . target abstract: ."
    print("\n[acceptance] criterion 8 (model-input serialization golden strings): PASS")


def test_criterion_09_registry_dynamics(platform, tmp_path):
    paths, shared_gateway = platform
    registry = CorpusRegistry()
    entered = threading.Event()
    release = threading.Event()
    blocking = {"armed": False}

    inner_scorer = shared_gateway.scorer

    class BlockingScorer:
        def __call__(self, context, keywords, title, abstract):
            if blocking["armed"]:
                entered.set()
                release.wait(timeout=10)
            return inner_scorer(context, keywords, title, abstract)

    gateway = Gateway(registry, shared_gateway.wv, BlockingScorer())
    client = TestClient(create_app(gateway))

    registration = {
        "corpus_id": PLANTED_SPEC.corpus_id,
        "store": str(paths.store),
        "inverted": str(paths.inverted),
        "embedding": str(paths.embedding),
    }
    planted_query = {"context": "planted retrieval check", "keywords": "plantedq000", "k": 5}

    assert client.post("/search", json=planted_query).status_code == 503  # nothing registered yet
    assert client.post("/admin/corpora", json=registration).json()["status"] == "active"
    before = client.post("/search", json=planted_query).json()
    assert [r["paper_id"] for r in before["results"]]  # planted paper appears

    blocking["armed"] = True
    outcome = {}

    def run_search():
        outcome["response"] = client.post("/search", json=planted_query)

    worker = threading.Thread(target=run_search)
    worker.start()
    assert entered.wait(timeout=10)
    assert client.delete(f"/admin/corpora/{PLANTED_SPEC.corpus_id}").json()["status"] == "removed"
    release.set()
    worker.join(timeout=30)
    blocking["armed"] = False

    in_flight = outcome["response"]
    assert in_flight.status_code == 200
    assert [r["paper_id"] for r in in_flight.json()["results"]]  # completed against its snapshot
    assert in_flight.json()["registry_version"] == before["registry_version"]

    after = client.post("/search", json=planted_query)
    assert after.status_code == 503  # corpus gone for new requests
    print("\n[acceptance] criterion 9 (register/search/deregister with in-flight snapshot isolation): PASS")
