from scholarkit.indexing import embeddings, inverted
from scholarkit.indexing.embeddings import EmbeddingIndex, document_text
from scholarkit.indexing.inverted import InvertedIndex
from scholarkit.indexing.vectors import DEFAULT_DIM, WordVectors, embed_text, seeded_word_vectors

__all__ = [
    "DEFAULT_DIM",
    "EmbeddingIndex",
    "InvertedIndex",
    "WordVectors",
    "document_text",
    "embed_text",
    "embeddings",
    "inverted",
    "seeded_word_vectors",
]
