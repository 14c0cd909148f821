"""Exception types shared across the toolkit."""


class ScholarkitError(Exception):
    """Base class for all toolkit errors."""


class PaperNotFound(ScholarkitError):
    """No record stored under the requested (corpus_id, paper_id)."""


class EmptyQuery(ScholarkitError):
    """Query string is empty or whitespace-only."""


class InvalidRange(ScholarkitError):
    """Year range with start > end."""


class QuerySyntaxError(ScholarkitError):
    """Malformed query string (dangling operator, empty term)."""


class InvalidQuery(ScholarkitError):
    """Search query with neither context nor keywords."""


class EmptyEmbedding(ScholarkitError):
    """No in-vocabulary token; there is nothing to embed."""


class ZeroVector(ScholarkitError):
    """Token vectors cancelled out; the mean has zero norm."""


class InvalidK(ScholarkitError):
    """Nearest-neighbour count must be >= 1."""


class EmptyDocument(ScholarkitError):
    """Record has no sentences to select highlights from."""


class NoContent(ScholarkitError):
    """Citation target has no abstract to extract a sentence from."""


class CorpusNotRegistered(ScholarkitError):
    """Operation addressed a corpus_id missing from the registry."""


class RegistrationError(ScholarkitError):
    """Corpus registration rejected (missing or inconsistent artifacts)."""


class TrainingError(ScholarkitError):
    """Scorer training aborted (e.g. non-finite gradient)."""
