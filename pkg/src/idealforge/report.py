"""Itemized check reports and deterministic JSON serialization.

Reports are plain data: an ordered list of named pass/fail items plus free
metadata.  Serialization keeps insertion order, renders exact rationals as
"p/q" strings, and never embeds timestamps, so identical inputs give byte
identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .ideals import EdgeSet, NatSet


def rational_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def jsonable(value: Any) -> Any:
    """Recursively convert toolkit values into JSON-ready structures."""
    if isinstance(value, Fraction):
        return rational_str(value)
    if isinstance(value, NatSet):
        return list(value.elements)
    if isinstance(value, EdgeSet):
        return {"n": value.n, "edges": [list(e) for e in sorted(value.edges)]}
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return [jsonable(v) for v in sorted(value)]
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if hasattr(value, "to_json_dict"):
        return value.to_json_dict()
    if hasattr(value, "elements"):
        return list(value.elements)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps_stable(obj: Any) -> str:
    """JSON with fixed (insertion) key order and a trailing newline."""
    return json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n"


@dataclass
class CheckItem:
    name: str
    passed: bool
    detail: str = ""

    def to_json_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class Report:
    """Ordered pass/fail items with optional free-form metadata."""

    items: List[CheckItem] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: str = "") -> "Report":
        self.items.append(CheckItem(name, bool(passed), detail))
        return self

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failed_names(self) -> List[str]:
        return [item.name for item in self.items if not item.passed]

    def item(self, name: str) -> Optional[CheckItem]:
        for it in self.items:
            if it.name == name:
                return it
        return None

    def __bool__(self) -> bool:
        return self.passed

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "items": [it.to_json_dict() for it in self.items],
            "meta": jsonable(self.meta),
        }
