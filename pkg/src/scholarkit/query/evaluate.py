"""Depth-first evaluation of an operation tree against an inverted index."""

from __future__ import annotations

from typing import Iterable, Protocol

from scholarkit.query.optree import AND, LEAF, OR, OpTree


class PostingsSource(Protocol):
    def postings(self, keyword: str) -> Iterable[str]: ...


def _evaluate(tree: OpTree, index: PostingsSource) -> set[str]:
    if tree.operation == LEAF:
        return set(index.postings(tree.keyword))
    child_sets = (_evaluate(child, index) for child in tree.elements)  # type: ignore[arg-type]
    if tree.operation == AND:
        result = next(child_sets)
        for s in child_sets:
            result &= s
        return result
    if tree.operation == OR:
        result = next(child_sets)
        for s in child_sets:
            result |= s
        return result
    raise ValueError(f"unknown operation {tree.operation!r}")


def evaluate(tree: OpTree, index: PostingsSource) -> list[str]:
    """Paper IDs matching the tree, sorted ascending for determinism."""
    return sorted(_evaluate(tree, index))
