"""Keyword query grammar.

::

    query  := clause (';' clause)*          combined by AND
    clause := term ('|' term)*              combined by OR
    term   := YYYY..YYYY                    inclusive year range
            | fieldpath:value               field filter, e.g. publicationdate.year:2020
            | free keyword                  lowercased, trimmed

A year range expands into an OR of ``publicationdate.year:<Y>`` leaves.
A free keyword of three or more words becomes an AND over its adjacent
bigrams, because the index holds only unigrams and bigrams.  No
parentheses, no NOT.
"""

from __future__ import annotations

import re

from scholarkit.corpus.keywords import year_keyword
from scholarkit.errors import EmptyQuery, InvalidRange, QuerySyntaxError
from scholarkit.query.optree import AND, OR, OpTree, and_, leaf, or_
from scholarkit.text import tokenize

_YEAR_RANGE = re.compile(r"^(\d{4})\.\.(\d{4})$")
_FIELD_FILTER = re.compile(r"^[\w.]+:\S+$")


def _keyword_node(term: str) -> OpTree:
    """Free keyword term -> AND of index-resolvable leaves."""
    words = tokenize(term)
    if not words:
        raise QuerySyntaxError(f"term {term!r} has no indexable words")
    if len(words) <= 2:
        return and_(leaf(" ".join(words)))
    return and_(*(leaf(f"{a} {b}") for a, b in zip(words, words[1:])))


def _term_nodes(term: str) -> list[OpTree]:
    """Nodes a term contributes to its clause; ranges contribute one per year."""
    match = _YEAR_RANGE.match(term)
    if match:
        start, end = int(match.group(1)), int(match.group(2))
        if start > end:
            raise InvalidRange(f"year range {term!r} has start > end")
        return [leaf(year_keyword(year)) for year in range(start, end + 1)]
    if _FIELD_FILTER.match(term):
        return [and_(leaf(term))]
    return [_keyword_node(term)]


def parse(query: str) -> OpTree:
    """Parse a keyword string into a boolean operation tree."""
    if not query or not query.strip():
        raise EmptyQuery("query is empty")
    clause_nodes = []
    for raw_clause in query.split(";"):
        if not raw_clause.strip():
            raise QuerySyntaxError("empty clause (dangling ';'?)")
        nodes: list[OpTree] = []
        for raw_term in raw_clause.split("|"):
            term = raw_term.strip().lower()
            if not term:
                raise QuerySyntaxError("empty term (dangling '|'?)")
            nodes.extend(_term_nodes(term))
        is_range = _YEAR_RANGE.match(raw_clause.strip()) is not None
        if len(nodes) == 1 and not is_range:
            clause_nodes.append(nodes[0])
        else:
            clause_nodes.append(or_(*nodes))
    return and_(*clause_nodes)


def leaf_keywords(tree: OpTree) -> list[str]:
    """All leaf keywords of a tree, in depth-first order."""
    if tree.operation not in (AND, OR):
        return [tree.keyword]
    out: list[str] = []
    for child in tree.elements:
        out.extend(leaf_keywords(child))  # type: ignore[arg-type]
    return out
