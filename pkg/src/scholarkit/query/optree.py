"""Boolean operation tree produced by the query parser.

The interchange form (``to_dict``/``from_dict``) uses ``operation`` values
``"AND"``, ``"OR"`` and ``None``; a leaf carries its keyword as the single
element of ``elements``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union

AND = "AND"
OR = "OR"
LEAF = "LEAF"


@dataclass(frozen=True)
class OpTree:
    operation: str
    elements: tuple[Union["OpTree", str], ...]

    def __post_init__(self) -> None:
        if self.operation == LEAF:
            if len(self.elements) != 1 or not isinstance(self.elements[0], str) or not self.elements[0]:
                raise ValueError("leaf node must hold exactly one non-empty keyword")
        elif self.operation in (AND, OR):
            if not self.elements:
                raise ValueError(f"{self.operation} node must have at least one child")
            if not all(isinstance(child, OpTree) for child in self.elements):
                raise ValueError(f"{self.operation} children must be nodes")
        else:
            raise ValueError(f"unknown operation {self.operation!r}")

    @property
    def keyword(self) -> str:
        if self.operation != LEAF:
            raise ValueError("not a leaf")
        return self.elements[0]  # type: ignore[return-value]

    def to_dict(self) -> dict[str, Any]:
        if self.operation == LEAF:
            return {"operation": None, "elements": [self.keyword]}
        return {"operation": self.operation, "elements": [child.to_dict() for child in self.elements]}  # type: ignore[union-attr]

    @classmethod
    def from_dict(cls, obj: dict[str, Any]) -> "OpTree":
        operation = obj["operation"]
        if operation is None:
            return leaf(obj["elements"][0])
        return cls(operation, tuple(cls.from_dict(child) for child in obj["elements"]))


def leaf(keyword: str) -> OpTree:
    return OpTree(LEAF, (keyword,))


def and_(*children: OpTree) -> OpTree:
    return OpTree(AND, tuple(children))


def or_(*children: OpTree) -> OpTree:
    return OpTree(OR, tuple(children))
