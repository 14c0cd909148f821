"""Data types flowing through the two-stage retrieval pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

from scholarkit.errors import InvalidQuery


@dataclass(frozen=True)
class Query:
    """User input: free-text context plus optional keyword string."""

    context: str = ""
    keywords: str = ""

    def __post_init__(self) -> None:
        if not self.context.strip() and not self.keywords.strip():
            raise InvalidQuery("need context or keywords")


@dataclass
class Candidate:
    """A prefetched paper with provenance corpus and scores."""

    corpus_id: str
    paper_id: str
    cosine: float | None = None
    affinity: float | None = None
    prefetch_rank: int | None = None
    rank: int | None = None
    title: str = ""
    author_family_names: tuple[str, ...] = ()
    abstract: str = ""


@dataclass(frozen=True)
class PrefetchConfig:
    candidates_per_corpus: int = 100

    def __post_init__(self) -> None:
        if self.candidates_per_corpus < 1:
            raise ValueError("candidates_per_corpus must be >= 1")


@dataclass
class TrainingExample:
    """One supervised sample: the cited paper plus a pool of uncited candidates.

    ``negative_pool`` holds (corpus_id, paper_id) pairs drawn from prefetched
    candidates; the trainer resamples negatives from it every iteration.
    """

    query: Query
    positive: tuple[str, str]
    negative_pool: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.negative_pool:
            raise ValueError("negative pool must not be empty")
        if self.positive in self.negative_pool:
            raise ValueError("positive paper present in the negative pool")
