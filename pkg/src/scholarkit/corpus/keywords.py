"""Keyword extraction: the terms a record is findable under.

A record contributes lowercase unigrams, adjacent-word bigrams whose two
words are both outside the stopword list, and field keywords such as
``publicationdate.year:2020``.  Bigrams never cross sentence (or title)
boundaries.
"""

from __future__ import annotations

from collections import Counter

from scholarkit.corpus.records import PaperRecord
from scholarkit.text import bigrams, tokenize

YEAR_FIELD = "publicationdate.year"


def year_keyword(year: int) -> str:
    return f"{YEAR_FIELD}:{year}"


def extract_keywords(record: PaperRecord, stopwords: frozenset[str]) -> Counter[str]:
    """Multiset of keywords from title, abstract and fullbody sentences."""
    keywords: Counter[str] = Counter()
    for unit in record.text_units():
        tokens = tokenize(unit)
        keywords.update(tok for tok in tokens if tok not in stopwords)
        keywords.update(
            f"{first} {second}"
            for first, second in bigrams(tokens)
            if first not in stopwords and second not in stopwords
        )
    if record.publication_date.year is not None:
        keywords[year_keyword(record.publication_date.year)] += 1
    return keywords
