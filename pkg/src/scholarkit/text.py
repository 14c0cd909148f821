"""Tokenization and sentence utilities used by indexing, embedding and metrics.

Every component that turns text into tokens goes through :func:`tokenize`
so that index keys, query leaves and embedding lookups agree on one
normalization: split on Unicode whitespace, strip leading/trailing
punctuation, lowercase.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from importlib import resources
from pathlib import Path

_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])\s+")


def _strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Lowercased tokens with surrounding punctuation removed.

    Tokens that consist only of punctuation are dropped from the stream,
    so the words around them become adjacent.
    """
    out = []
    for raw in text.lower().split():
        tok = _strip_punct(raw)
        if tok:
            out.append(tok)
    return out


def bigrams(tokens: list[str]) -> list[tuple[str, str]]:
    return list(zip(tokens, tokens[1:]))


def split_sentences(text: str) -> list[str]:
    """Split plain text into sentences on terminal punctuation.

    Deliberately simple and deterministic; parsed records carry their own
    sentence segmentation and do not use this.
    """
    parts = [p.strip() for p in _SENTENCE_BOUNDARY.split(text)]
    return [p for p in parts if p]


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Stopword set from ``path``, or the packaged English default."""
    if path is None:
        data = resources.files("scholarkit.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        data = Path(path).read_text("utf-8")
    words = set()
    for line in data.splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def stopwords_digest(stopwords: frozenset[str]) -> str:
    """Stable hash of a stopword set, recorded in index manifests."""
    payload = "\n".join(sorted(stopwords)).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()
