"""Trainable affinity scorer for reranking prefetched candidates.

The reference scorer is a linear model over four query/document features;
it is deliberately simple (gradient-checkable, trains in seconds) and sits
behind the same callable contract a cross-encoder service would use:
``score(context, keywords, title, abstract) -> float``.  The query side is
always presented as (context, keywords) and the document side as
(title, abstract), in that order.

Training minimizes a listwise softmax cross-entropy: the loss of scoring
one cited paper s+ against N uncited papers s-_i is

    L = -log( exp(s+) / (exp(s+) + sum_i exp(s-_i)) )

with negatives resampled from each example's candidate pool at every
iteration.
"""

from __future__ import annotations

import functools
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from scholarkit.errors import TrainingError
from scholarkit.indexing.vectors import WordVectors, embed_text
from scholarkit.errors import EmptyEmbedding, ZeroVector
from scholarkit.query.parser import leaf_keywords, parse
from scholarkit.retrieval.types import Query, TrainingExample
from scholarkit.text import tokenize

log = logging.getLogger(__name__)

FEATURE_NAMES = (
    "context_cosine",
    "unigram_jaccard",
    "keyword_coverage",
    "log_abstract_len",
)
N_FEATURES = len(FEATURE_NAMES)


def softmax_rank_loss(score_pos: float, scores_neg: Sequence[float]) -> float:
    """Cross-entropy of ranking the positive above N negatives.

    Computed with max-subtraction; strictly positive for finite inputs
    whose gaps stay within float range.
    """
    if len(scores_neg) == 0:
        raise ValueError("at least one negative score required")
    neg = np.asarray(scores_neg, dtype=np.float64)
    if not (math.isfinite(score_pos) and np.all(np.isfinite(neg))):
        raise ValueError("scores must be finite")
    m = float(neg.max())
    with np.errstate(over="ignore"):
        if score_pos >= m:
            return float(np.log1p(np.exp(neg - score_pos).sum()))
        return float(np.log(np.exp(score_pos - m) + np.exp(neg - m).sum()) - (score_pos - m))


def softmax_rank_loss_grad(score_pos: float, scores_neg: Sequence[float]) -> tuple[float, np.ndarray]:
    """(dL/ds+, dL/ds-_i): softmax probabilities shifted so they sum to 0."""
    neg = np.asarray(scores_neg, dtype=np.float64)
    m = max(score_pos, float(neg.max()))
    with np.errstate(over="ignore"):
        exp_pos = np.exp(score_pos - m)
        exp_neg = np.exp(neg - m)
    total = exp_pos + exp_neg.sum()
    return float(exp_pos / total - 1.0), exp_neg / total


class AffinityFeaturizer:
    """f(q, d) for the linear scorer.

    Features: cosine between the context embedding and the title+abstract
    embedding; unigram Jaccard overlap of the two sides; fraction of query
    keywords occurring in the document text; log(1 + abstract token count).
    """

    def __init__(self, wv: WordVectors, cache_size: int = 65536):
        self.wv = wv
        # Candidate documents repeat across queries; cache their embeddings.
        self._embed = functools.lru_cache(maxsize=cache_size)(self._embed_uncached)

    def _embed_uncached(self, text: str) -> np.ndarray | None:
        try:
            return embed_text(text, self.wv)
        except (EmptyEmbedding, ZeroVector):
            return None

    def query_vector(self, context: str) -> np.ndarray | None:
        return self._embed(context)

    def query_keywords(self, keywords: str) -> list[str]:
        if not keywords.strip():
            return []
        try:
            leaves = leaf_keywords(parse(keywords))
        except Exception:
            return []
        return [k for k in leaves if ":" not in k]

    def features(
        self,
        context: str,
        keywords: str,
        title: str,
        abstract: str,
        query_vec: np.ndarray | None = None,
        keyword_list: list[str] | None = None,
    ) -> np.ndarray:
        if query_vec is None:
            query_vec = self.query_vector(context)
        if keyword_list is None:
            keyword_list = self.query_keywords(keywords)
        doc_text = f"{title} {abstract}"
        doc_vec = self._embed(doc_text)
        cosine = float(query_vec @ doc_vec) if query_vec is not None and doc_vec is not None else 0.0

        q_tokens = set(tokenize(f"{context} {keywords}"))
        d_tokens = set(tokenize(doc_text))
        union = q_tokens | d_tokens
        jaccard = len(q_tokens & d_tokens) / len(union) if union else 0.0

        if keyword_list:
            doc_norm = " ".join(tokenize(doc_text))
            coverage = sum(1 for k in keyword_list if k in doc_norm) / len(keyword_list)
        else:
            coverage = 0.0

        return np.array([cosine, jaccard, coverage, math.log1p(len(tokenize(abstract)))], dtype=np.float64)


@dataclass
class LinearScorer:
    """s(q, d) = w . f(q, d) + b over the affinity features."""

    featurizer: AffinityFeaturizer
    weights: np.ndarray
    bias: float = 0.0

    @classmethod
    def initial(cls, featurizer: AffinityFeaturizer) -> "LinearScorer":
        # Start from pure semantic similarity so an untrained scorer is already sane.
        w = np.zeros(N_FEATURES, dtype=np.float64)
        w[0] = 1.0
        return cls(featurizer, w)

    def score_features(self, features: np.ndarray) -> float:
        return float(features @ self.weights + self.bias)

    def __call__(self, context: str, keywords: str, title: str, abstract: str) -> float:
        return self.score_features(self.featurizer.features(context, keywords, title, abstract))

    def score_many(self, query: Query, docs: Sequence[tuple[str, str]]) -> list[float]:
        """Scores for (title, abstract) pairs, embedding the context once."""
        qvec = self.featurizer.query_vector(query.context)
        kws = self.featurizer.query_keywords(query.keywords)
        return [
            self.score_features(
                self.featurizer.features(query.context, query.keywords, t, a, query_vec=qvec, keyword_list=kws)
            )
            for t, a in docs
        ]

    def save(self, path: str | Path) -> None:
        payload = {"feature_names": list(FEATURE_NAMES), "weights": self.weights.tolist(), "bias": self.bias}
        Path(path).write_text(json.dumps(payload, indent=2), "utf-8")

    @classmethod
    def load(cls, path: str | Path, featurizer: AffinityFeaturizer) -> "LinearScorer":
        payload = json.loads(Path(path).read_text("utf-8"))
        if payload.get("feature_names") != list(FEATURE_NAMES):
            raise ValueError(f"{path}: unknown feature set {payload.get('feature_names')}")
        return cls(featurizer, np.asarray(payload["weights"], dtype=np.float64), float(payload["bias"]))


def example_loss_and_grad(
    weights: np.ndarray,
    bias: float,
    pos_features: np.ndarray,
    neg_features: np.ndarray,
) -> tuple[float, np.ndarray, float]:
    """(loss, dL/dw, dL/db) for one example under the linear scorer."""
    with np.errstate(over="ignore"):
        s_pos = float(pos_features @ weights + bias)
        s_neg = neg_features @ weights + bias
        loss = softmax_rank_loss(s_pos, s_neg)
        g_pos, g_neg = softmax_rank_loss_grad(s_pos, s_neg)
        grad_w = g_pos * pos_features + g_neg @ neg_features
        grad_b = g_pos + float(g_neg.sum())
    return loss, grad_w, grad_b


@dataclass
class TrainConfig:
    negatives: int = 10
    epochs: int = 20
    learning_rate: float = 0.1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")


@dataclass
class FeaturizedExample:
    pos: np.ndarray          # (N_FEATURES,)
    pool: np.ndarray         # (pool_size, N_FEATURES)


def featurize_example(
    example: TrainingExample,
    featurizer: AffinityFeaturizer,
    lookup: Callable[[tuple[str, str]], tuple[str, str]],
) -> FeaturizedExample:
    """Precompute features for the positive and the whole negative pool.

    ``lookup`` maps (corpus_id, paper_id) to (title, abstract).
    """
    q = example.query
    qvec = featurizer.query_vector(q.context)
    kws = featurizer.query_keywords(q.keywords)

    def feats(ref: tuple[str, str]) -> np.ndarray:
        title, abstract = lookup(ref)
        return featurizer.features(q.context, q.keywords, title, abstract, query_vec=qvec, keyword_list=kws)

    pool = np.stack([feats(ref) for ref in example.negative_pool])
    return FeaturizedExample(pos=feats(example.positive), pool=pool)


def train_scorer(
    examples: Iterable[FeaturizedExample],
    featurizer: AffinityFeaturizer,
    config: TrainConfig = TrainConfig(),
) -> tuple[LinearScorer, list[float]]:
    """SGD on the listwise loss; returns the scorer and per-epoch mean loss.

    Deterministic for a fixed seed.  Negatives are drawn fresh from each
    example's pool every epoch (with replacement when the pool is smaller
    than the configured count).
    """
    examples = list(examples)
    if not examples:
        raise ValueError("no training examples")
    rng = np.random.default_rng(config.seed)
    scorer = LinearScorer.initial(featurizer)
    w = scorer.weights.copy()
    b = scorer.bias
    history: list[float] = []
    for epoch in range(config.epochs):
        order = rng.permutation(len(examples))
        total = 0.0
        for idx in order:
            ex = examples[idx]
            pool_size = ex.pool.shape[0]
            chosen = rng.choice(pool_size, size=config.negatives, replace=pool_size < config.negatives)
            try:
                loss, grad_w, grad_b = example_loss_and_grad(w, b, ex.pos, ex.pool[chosen])
            except ValueError as exc:
                raise TrainingError(f"scoring failed at epoch {epoch}: {exc}") from exc
            if not (math.isfinite(loss) and np.all(np.isfinite(grad_w)) and math.isfinite(grad_b)):
                raise TrainingError(
                    f"non-finite loss/gradient at epoch {epoch}: loss={loss}, |grad|={np.abs(grad_w).max()}"
                )
            w -= config.learning_rate * grad_w
            b -= config.learning_rate * grad_b
            total += loss
        history.append(total / len(examples))
        log.debug("epoch %d: mean loss %.6f", epoch, history[-1])
    return LinearScorer(featurizer, w, b), history
