"""Batch evaluation of a running platform.

One suite run produces, per keyword arm (with / without the sample
keywords):

* a recall grid over every (prefetch budget, cutoff) pair,
* the budget sweep at cutoff = budget (non-decreasing by construction of
  the candidate pool; violations are reported as property failures),
* extractive-summarization ROUGE of fullbody highlights against abstracts,
* best-of-top-K citation generation ROUGE against the ground-truth
  sentences, checked to be monotone in K.

Samples whose cited paper is not registered are skipped and counted.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from scholarkit.evalkit.metrics import ROUGE_VARIANTS, best_of_top_k, mean_recall, recall_at_k, rouge_all
from scholarkit.evalkit.samples import EvalSample, load_samples
from scholarkit.services.gateway import Gateway

log = logging.getLogger(__name__)

ARM_WITH = "with_keywords"
ARM_WITHOUT = "without_keywords"


@dataclass
class SuiteConfig:
    samples_path: Path
    np_values: list[int] = field(default_factory=lambda: [50, 100, 200, 300])
    k_values: list[int] = field(default_factory=lambda: [1, 5, 10, 20, 50, 100])
    generation_k: list[int] = field(default_factory=lambda: [1, 5, 10])
    arms: list[str] = field(default_factory=lambda: [ARM_WITH, ARM_WITHOUT])
    seed: int = 0


def _resolve_cited(gateway: Gateway, sample: EvalSample) -> str | None:
    """Corpus holding the cited paper, or None when unregistered."""
    snapshot = gateway.registry.snapshot()
    if sample.cited_corpus_id:
        try:
            snapshot.handle(sample.cited_corpus_id).store.get(sample.cited_paper_id)
            return sample.cited_corpus_id
        except Exception:
            return None
    for handle in snapshot.handles:
        if sample.cited_paper_id in handle.store:
            return handle.corpus_id
    return None


def run_suite(gateway: Gateway, config: SuiteConfig) -> dict:
    samples = load_samples(config.samples_path)
    usable: list[tuple[EvalSample, str]] = []
    skipped = 0
    for sample in samples:
        corpus_id = _resolve_cited(gateway, sample)
        if corpus_id is None:
            skipped += 1
            log.warning("sample for %s skipped: cited paper not registered", sample.cited_paper_id)
            continue
        usable.append((sample, corpus_id))

    failures: list[str] = []
    registry_version = gateway.registry.snapshot().version
    recall_grid: dict[str, dict[int, dict[int, float]]] = {}
    np_sweep: dict[str, dict[int, float]] = {}

    for arm in config.arms:
        recall_grid[arm] = {}
        np_sweep[arm] = {}
        for budget in config.np_values:
            cutoff = max(max(config.k_values), budget)
            hits_per_k: dict[int, list[int]] = {k: [] for k in config.k_values}
            hits_at_budget: list[int] = []
            for sample, _corpus in usable:
                keywords = sample.keywords if arm == ARM_WITH else ""
                response = gateway.search(
                    context=sample.context,
                    keywords=keywords,
                    prefetch_limit=budget,
                    top_k=cutoff,
                    with_highlights=False,
                    with_citations=False,
                )
                ranked = [r["paper_id"] for r in response["results"]]
                for k in config.k_values:
                    hits_per_k[k].append(recall_at_k(ranked, sample.cited_paper_id, k))
                hits_at_budget.append(recall_at_k(ranked, sample.cited_paper_id, budget))
            recall_grid[arm][budget] = {k: mean_recall(hits_per_k[k]) for k in config.k_values}
            np_sweep[arm][budget] = mean_recall(hits_at_budget)

        sweep = [np_sweep[arm][budget] for budget in sorted(config.np_values)]
        if any(b < a for a, b in zip(sweep, sweep[1:])):
            failures.append(f"{arm}: recall at cutoff=budget decreased along the budget sweep: {sweep}")

    # Highlights vs abstracts over distinct cited papers.
    rouge_sums = {v: 0.0 for v in ROUGE_VARIANTS}
    seen: set[tuple[str, str]] = set()
    for sample, corpus_id in usable:
        key = (corpus_id, sample.cited_paper_id)
        if key in seen:
            continue
        seen.add(key)
        record = gateway.registry.snapshot().handle(corpus_id).store.get(sample.cited_paper_id)
        result = gateway.highlights(corpus_id, sample.cited_paper_id)
        candidate = " ".join(s["text"] for s in result["sentences"])
        reference = " ".join(record.abstract_sentences())
        for variant, score in rouge_all(candidate, reference).items():
            rouge_sums[variant] += score
    summarization = {v: (rouge_sums[v] / len(seen) if seen else 0.0) for v in ROUGE_VARIANTS}

    generation: dict[str, dict[int, dict[str, float]]] = {}
    max_gen_k = max(config.generation_k)
    for arm in config.arms:
        sums = {k: {v: 0.0 for v in ROUGE_VARIANTS} for k in config.generation_k}
        for sample, _corpus in usable:
            keywords = sample.keywords if arm == ARM_WITH else ""
            response = gateway.search(
                context=sample.context,
                keywords=keywords,
                prefetch_limit=None,
                top_k=max_gen_k,
                with_highlights=False,
                with_citations=False,
            )
            sentences = []
            for result in response["results"]:
                try:
                    sentences.append(
                        gateway.cite(result["corpus_id"], result["paper_id"], sample.context, keywords)["sentence"]
                    )
                except Exception as exc:  # degraded, not fatal
                    log.warning("generation failed for %s: %s", result["paper_id"], exc)
            previous = None
            for k in sorted(config.generation_k):
                prefix = sentences[:k]
                scores = (
                    best_of_top_k(prefix, sample.citation_sentence)
                    if prefix
                    else {v: 0.0 for v in ROUGE_VARIANTS}
                )
                if previous is not None and any(scores[v] < previous[v] - 1e-12 for v in ROUGE_VARIANTS):
                    failures.append(f"{arm}: best-of-top-k decreased in k for {sample.cited_paper_id}")
                previous = scores
                for v in ROUGE_VARIANTS:
                    sums[k][v] += scores[v]
        generation[arm] = {
            k: {v: (sums[k][v] / len(usable) if usable else 0.0) for v in ROUGE_VARIANTS}
            for k in config.generation_k
        }

    return {
        "registry_version": registry_version,
        "seed": config.seed,
        "sample_count": len(usable),
        "skipped": skipped,
        "np_values": sorted(config.np_values),
        "k_values": sorted(config.k_values),
        "generation_k": sorted(config.generation_k),
        "arms": list(config.arms),
        "recall_grid": recall_grid,
        "np_sweep": np_sweep,
        "summarization": summarization,
        "generation": generation,
        "property_failures": failures,
    }
