from scholarkit.query.evaluate import evaluate
from scholarkit.query.optree import AND, LEAF, OR, OpTree, and_, leaf, or_
from scholarkit.query.parser import leaf_keywords, parse

__all__ = ["AND", "LEAF", "OR", "OpTree", "and_", "evaluate", "leaf", "leaf_keywords", "or_", "parse"]
