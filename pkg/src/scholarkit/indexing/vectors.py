"""Word vectors and document embedding.

A document embedding is the mean of the vectors of its in-vocabulary
tokens, L2-normalized.  Training word vectors is out of scope here: load a
pretrained file, or derive a deterministic vector per word (seeded from a
hash of the word) so that any corpus can be embedded reproducibly without
external models.

File format: text, first line ``<vocab_size> <dim>``, then one
``<word> <dim floats>`` per line.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Iterable

import numpy as np

from scholarkit.errors import EmptyEmbedding, ZeroVector
from scholarkit.text import tokenize

DEFAULT_DIM = 256


class WordVectors:
    def __init__(self, vectors: dict[str, np.ndarray], dim: int):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        for word, vec in vectors.items():
            if vec.shape != (dim,):
                raise ValueError(f"vector for {word!r} has shape {vec.shape}, expected ({dim},)")
        self.dim = dim
        self._vectors = vectors

    def __contains__(self, word: str) -> bool:
        return word in self._vectors

    def __getitem__(self, word: str) -> np.ndarray:
        return self._vectors[word]

    def __len__(self) -> int:
        return len(self._vectors)

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(self._vectors)} {self.dim}\n")
            for word in sorted(self._vectors):
                floats = " ".join(repr(float(x)) for x in self._vectors[word])
                fh.write(f"{word} {floats}\n")

    @classmethod
    def load(cls, path: str | Path) -> "WordVectors":
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: bad header, expected '<vocab_size> <dim>'")
            vocab_size, dim = int(header[0]), int(header[1])
            vectors: dict[str, np.ndarray] = {}
            for line in fh:
                parts = line.rstrip("\n").split(" ")
                if len(parts) != dim + 1:
                    raise ValueError(f"{path}: line with {len(parts) - 1} floats, expected {dim}")
                vectors[parts[0]] = np.array([float(x) for x in parts[1:]], dtype=np.float32)
        if len(vectors) != vocab_size:
            raise ValueError(f"{path}: header says {vocab_size} words, found {len(vectors)}")
        return cls(vectors, dim)


def _word_vector(word: str, dim: int, seed: int) -> np.ndarray:
    digest = hashlib.sha256(f"{seed}:{word}".encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    return rng.standard_normal(dim).astype(np.float32)


def seeded_word_vectors(words: Iterable[str], dim: int = DEFAULT_DIM, seed: int = 0) -> WordVectors:
    """Deterministic pseudo-random vectors, one per distinct word."""
    return WordVectors({w: _word_vector(w, dim, seed) for w in set(words)}, dim)


def embed_text(text: str, wv: WordVectors) -> np.ndarray:
    """Unit-norm mean vector of the in-vocabulary tokens of ``text``.

    Raises EmptyEmbedding if no token is in vocabulary, ZeroVector if the
    token vectors cancel to norm 0.
    """
    vecs = [wv[tok] for tok in tokenize(text) if tok in wv]
    if not vecs:
        raise EmptyEmbedding("no in-vocabulary token")
    mean = np.mean(np.stack(vecs).astype(np.float64), axis=0)
    norm = float(np.linalg.norm(mean))
    if norm == 0.0:
        raise ZeroVector("token vectors cancel out")
    return (mean / norm).astype(np.float32)
