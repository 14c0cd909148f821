from scholarkit.retrieval.pipeline import CorpusHandle, RetrievalPipeline, dedup, prefetch, rerank
from scholarkit.retrieval.scorer import (
    AffinityFeaturizer,
    FeaturizedExample,
    LinearScorer,
    TrainConfig,
    example_loss_and_grad,
    featurize_example,
    softmax_rank_loss,
    softmax_rank_loss_grad,
    train_scorer,
)
from scholarkit.retrieval.types import Candidate, PrefetchConfig, Query, TrainingExample

__all__ = [
    "AffinityFeaturizer",
    "Candidate",
    "CorpusHandle",
    "FeaturizedExample",
    "LinearScorer",
    "PrefetchConfig",
    "Query",
    "RetrievalPipeline",
    "TrainConfig",
    "TrainingExample",
    "dedup",
    "example_loss_and_grad",
    "featurize_example",
    "prefetch",
    "rerank",
    "softmax_rank_loss",
    "softmax_rank_loss_grad",
    "train_scorer",
]
