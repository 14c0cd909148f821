"""Literature discovery and writing-assist toolkit.

Subpackages: ``corpus`` (parsed-paper store and keyword extraction),
``query`` (boolean keyword grammar), ``indexing`` (inverted and embedding
indexes), ``retrieval`` (two-stage search and the trainable reranker),
``highlights``, ``citegen``, ``services`` (HTTP gateway and registry) and
``evalkit`` (evaluation harness).
"""

__version__ = "0.1.0"
