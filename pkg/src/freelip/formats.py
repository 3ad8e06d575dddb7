"""JSON encodings of spaces, graphs, elements, functions and reports.

Rationals are always strings in lowest terms (``"3"``, ``"-1/2"``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .extremal import MoleculeClassification
from .freespace import FreeElement, LipFunction
from .metric import FiniteMetricSpace, diameter, from_graph, is_ultrametric, validate
from .rational import format_rational, parse_rational

SCHEMA = "freelip/1"

__all__ = [
    "SCHEMA",
    "FormatError",
    "space_to_dict",
    "space_from_dict",
    "graph_from_dict",
    "load_space",
    "dump_space",
    "element_to_dict",
    "element_from_dict",
    "function_to_dict",
    "function_from_dict",
    "classification_to_dict",
    "classification_from_dict",
    "space_summary",
    "Report",
]


class FormatError(ValueError):
    """Input file is not in the expected shape (maps to CLI exit code 2)."""


def _expect(obj, key, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing key {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise FormatError(f"{key!r} should be {getattr(kind, '__name__', kind)}")
    return val


def _rat(text) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise FormatError(str(e)) from None


def space_to_dict(M: FiniteMetricSpace) -> dict:
    return {
        "points": list(M.labels),
        "base": M.labels[M.base_index],
        "d": [[format_rational(v) for v in row] for row in M.dist],
    }


def space_from_dict(obj: dict) -> FiniteMetricSpace:
    points = _expect(obj, "points", list)
    base = _expect(obj, "base", str)
    rows = _expect(obj, "d", list)
    if not all(isinstance(r, list) for r in rows):
        raise FormatError("'d' must be a list of rows")
    matrix = [[_rat(v) for v in r] for r in rows]
    return validate([str(p) for p in points], base, matrix)


def graph_from_dict(obj: dict) -> FiniteMetricSpace:
    base = _expect(obj, "base", str)
    edges = _expect(obj, "edges", list)
    parsed = []
    for e in edges:
        if not isinstance(e, list) or len(e) != 3:
            raise FormatError(f"edge {e!r} is not [label, label, weight]")
        parsed.append((str(e[0]), str(e[1]), _rat(e[2])))
    return from_graph(parsed, base)


def _read_json(path: Union[str, Path]) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from None


def load_space(path: Union[str, Path]) -> FiniteMetricSpace:
    """Read a space file or a graph file (detected by an ``"edges"`` key)."""
    obj = _read_json(path)
    if isinstance(obj, dict) and "edges" in obj:
        return graph_from_dict(obj)
    return space_from_dict(obj)


def dump_space(M: FiniteMetricSpace, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(space_to_dict(M), indent=1) + "\n", encoding="utf-8")


def element_to_dict(mu: FreeElement) -> dict:
    lab = mu.space.labels
    return {"coeffs": {lab[x]: format_rational(v) for x, v in mu.coeffs.items()}}


def element_from_dict(M: FiniteMetricSpace, obj: dict) -> FreeElement:
    coeffs = _expect(obj, "coeffs", dict)
    try:
        return FreeElement(M, {M.index(str(k)): _rat(v) for k, v in coeffs.items()})
    except KeyError as e:
        raise FormatError(f"element refers to {e.args[0]}") from None


def function_to_dict(f: LipFunction) -> dict:
    return {"values": {l: format_rational(v) for l, v in zip(f.space.labels, f.values)}}


def function_from_dict(M: FiniteMetricSpace, obj: dict) -> LipFunction:
    values = _expect(obj, "values", dict)
    try:
        return LipFunction.from_mapping(M, {M.index(str(k)): _rat(v) for k, v in values.items()})
    except KeyError as e:
        raise FormatError(f"function refers to {e.args[0]}") from None


def _opt_rat(v: Optional[Fraction]) -> Optional[str]:
    return None if v is None else format_rational(v)


def classification_to_dict(M: FiniteMetricSpace, c: MoleculeClassification) -> dict:
    lab = M.labels
    return {
        "pair": [lab[c.pair[0]], lab[c.pair[1]]],
        "segment": sorted((lab[x] for x in c.segment), key=lab.index),
        "is_extreme": c.is_extreme,
        "is_preserved_extreme": c.is_preserved_extreme,
        "is_denting": c.is_denting,
        "strongly_exposed_constant": _opt_rat(c.strongly_exposed_constant),
        "exposing_functional": None if c.exposing_functional is None else function_to_dict(c.exposing_functional),
        "oracle_extreme": c.oracle_extreme,
    }


def classification_from_dict(M: FiniteMetricSpace, row: dict) -> MoleculeClassification:
    c = row.get("strongly_exposed_constant")
    ef = row.get("exposing_functional")
    return MoleculeClassification(
        pair=(M.index(row["pair"][0]), M.index(row["pair"][1])),
        segment=frozenset(M.index(x) for x in row["segment"]),
        is_extreme=bool(row["is_extreme"]),
        is_preserved_extreme=bool(row["is_preserved_extreme"]),
        is_denting=bool(row["is_denting"]),
        strongly_exposed_constant=None if c is None else _rat(c),
        exposing_functional=None if ef is None else function_from_dict(M, ef),
        oracle_extreme=row.get("oracle_extreme"),
    )


def space_summary(M: FiniteMetricSpace) -> dict:
    return {
        "points": M.n,
        "base": M.labels[M.base_index],
        "diameter": format_rational(diameter(M)),
        "ultrametric": is_ultrametric(M),
    }


@dataclass
class Report:
    """Machine-readable output of one CLI command.

    ``rows`` and ``checks`` hold JSON-native values only (rationals already
    encoded), so ``Report.from_json(r.to_json()) == r``.
    """

    command: str
    space: dict
    rows: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    timing: float = 0.0

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "space": self.space,
            "rows": self.rows,
            "checks": self.checks,
            "extra": self.extra,
            "timing": self.timing,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        obj = json.loads(text)
        if obj.get("schema") != SCHEMA:
            raise FormatError(f"unsupported report schema {obj.get('schema')!r}")
        return cls(
            command=obj["command"],
            space=obj["space"],
            rows=obj["rows"],
            checks=obj["checks"],
            extra=obj.get("extra", {}),
            timing=obj["timing"],
        )
