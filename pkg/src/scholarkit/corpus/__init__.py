from scholarkit.corpus.keywords import extract_keywords, year_keyword
from scholarkit.corpus.records import (
    Author,
    CiteSpan,
    PaperRecord,
    Paragraph,
    PublicationDate,
    RecordInvalid,
    ReferenceEntry,
    Section,
    SentenceUnit,
    canonical_json,
    record_from_json,
    record_to_json,
    validate_record,
)
from scholarkit.corpus.store import CorpusStore, IngestReport, open_store, store_path

__all__ = [
    "Author",
    "CiteSpan",
    "CorpusStore",
    "IngestReport",
    "PaperRecord",
    "Paragraph",
    "PublicationDate",
    "RecordInvalid",
    "ReferenceEntry",
    "Section",
    "SentenceUnit",
    "canonical_json",
    "extract_keywords",
    "open_store",
    "record_from_json",
    "record_to_json",
    "store_path",
    "validate_record",
    "year_keyword",
]
