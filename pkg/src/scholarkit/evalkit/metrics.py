"""Retrieval and text-overlap metrics.

ROUGE F1 operates on lowercased, punctuation-stripped tokens (the shared
tokenizer): variants 1 and 2 count clipped n-gram overlap, variant L uses
the longest common subsequence of the two token sequences.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from scholarkit.text import tokenize

ROUGE_VARIANTS = ("1", "2", "L")


def recall_at_k(ranked_ids: Sequence[str], truth_id: str, k: int) -> int:
    """1 if the truth appears within the first k entries, else 0."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return int(truth_id in ranked_ids[:k])


def mean_recall(hits: Sequence[int]) -> float:
    if not hits:
        return 0.0
    return sum(hits) / len(hits)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token_a in a:
        current = [0]
        for j, token_b in enumerate(b, start=1):
            if token_a == token_b:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def _f1(overlap: int, candidate_total: int, reference_total: int) -> float:
    if candidate_total == 0 or reference_total == 0:
        return 0.0
    precision = overlap / candidate_total
    recall = overlap / reference_total
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def rouge_f1(candidate: str, reference: str, variant: str = "1") -> float:
    """ROUGE-{1,2,L} F1 in [0, 1]; both-empty inputs score 0."""
    if variant not in ROUGE_VARIANTS:
        raise ValueError(f"variant must be one of {ROUGE_VARIANTS}, got {variant!r}")
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if variant == "L":
        return _f1(_lcs_length(cand, ref), len(cand), len(ref))
    n = int(variant)
    cand_ngrams = _ngrams(cand, n)
    ref_ngrams = _ngrams(ref, n)
    overlap = sum(min(count, ref_ngrams[gram]) for gram, count in cand_ngrams.items())
    return _f1(overlap, sum(cand_ngrams.values()), sum(ref_ngrams.values()))


def rouge_all(candidate: str, reference: str) -> dict[str, float]:
    return {variant: rouge_f1(candidate, reference, variant) for variant in ROUGE_VARIANTS}


def best_of_top_k(generated: Sequence[str], reference: str) -> dict[str, float]:
    """Per-variant maximum ROUGE F1 over the generated sentences."""
    if not generated:
        raise ValueError("need at least one generated sentence")
    best = {variant: 0.0 for variant in ROUGE_VARIANTS}
    for sentence in generated:
        for variant in ROUGE_VARIANTS:
            score = rouge_f1(sentence, reference, variant)
            if score > best[variant]:
                best[variant] = score
    return best
