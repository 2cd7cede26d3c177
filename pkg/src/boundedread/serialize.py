"""JSON reading and writing for polynomials, models and partitions."""

from __future__ import annotations

import json
from typing import Any

from .abp import Abp
from .field import DEFAULT_PRIME
from .formula import Const, Formula, Node, Prod, Sum, Var
from .partitions import Pairing, Partition
from .poly import MultilinearPoly


class SchemaError(ValueError):
    pass


def node_to_json(nd: Node) -> Any:
    if isinstance(nd, Var):
        return {"x": nd.index}
    if isinstance(nd, Const):
        return {"c": nd.value}
    op = "+" if isinstance(nd, Sum) else "*"
    return [op] + [node_to_json(ch) for ch in nd.children]


def node_from_json(data: Any) -> Node:
    if isinstance(data, dict):
        if "x" in data:
            return Var(int(data["x"]))
        if "c" in data:
            return Const(int(data["c"]))
        raise SchemaError(f"leaf needs an 'x' or 'c' key, got {sorted(data)}")
    if isinstance(data, list) and data and data[0] in ("+", "*"):
        if len(data) < 2:
            raise SchemaError(f"gate {data[0]!r} has no children")
        kids = tuple(node_from_json(ch) for ch in data[1:])
        return Sum(kids) if data[0] == "+" else Prod(kids)
    raise SchemaError(f"cannot parse formula node {data!r}")


def formula_to_json(F: Formula) -> dict:
    return {"kind": "formula", "n": F.n, "p": F.p, "root": node_to_json(F.root)}


def formula_from_json(data: dict) -> Formula:
    return Formula(node_from_json(data["root"]), int(data["n"]), int(data.get("p", DEFAULT_PRIME)))


def to_json(obj) -> dict:
    if isinstance(obj, Formula):
        return formula_to_json(obj)
    if isinstance(obj, (Abp, MultilinearPoly, Partition, Pairing)):
        return obj.to_json()
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def dumps(obj, indent: int | None = None) -> str:
    data = obj if isinstance(obj, (dict, list)) else to_json(obj)
    return json.dumps(data, indent=indent, sort_keys=True)


def load_model(data: dict) -> Formula | Abp:
    """Formula or ABP from parsed JSON; the kind is inferred when absent."""
    kind = data.get("kind")
    if kind == "formula" or (kind is None and "root" in data):
        return formula_from_json(data)
    if kind == "abp" or (kind is None and "layers" in data):
        return Abp.from_json(data)
    raise SchemaError(f"unknown model kind {kind!r}")


def load_any(data: dict):
    """Polynomial, model, partition or pairing, judged by the keys present."""
    if "terms" in data:
        return MultilinearPoly.from_json(data)
    if "pairs" in data:
        return Pairing.from_json(data)
    if "Y" in data:
        return Partition.from_json(data)
    return load_model(data)


def read_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path: str | None, data: Any) -> None:
    text = json.dumps(data, sort_keys=True) + "\n"
    if path is None or path == "-":
        import sys

        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
