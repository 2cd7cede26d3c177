"""Layered algebraic branching programs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .field import DEFAULT_PRIME
from .formula import NonMultilinear
from .poly import MultilinearPoly

MAX_EXPAND_VARS = 20


@dataclass(frozen=True, order=True)
class Edge:
    src: int
    dst: int
    var: int | None  # None for a constant label
    coeff: int = 1

    @property
    def is_const(self) -> bool:
        return self.var is None


class Abp:
    """Layered DAG with source ``s`` (layer 0) and sink ``t`` (last layer).

    Edges run between consecutive layers and carry either a constant ``c`` or
    a scaled variable ``c * x_i``. Parallel edges are allowed.
    """

    __slots__ = ("n", "p", "layers", "edges", "_layer_of", "_out", "_in")

    def __init__(self, n: int, layers: Sequence[Sequence[int]], edges: Iterable[Edge], p: int = DEFAULT_PRIME):
        self.n = n
        self.p = p
        self.layers = tuple(tuple(layer) for layer in layers)
        if len(self.layers) < 2:
            raise ValueError("an ABP needs at least two layers")
        if len(self.layers[0]) != 1 or len(self.layers[-1]) != 1:
            raise ValueError("first and last layers must be singletons {s} and {t}")
        self._layer_of: dict[int, int] = {}
        for k, layer in enumerate(self.layers):
            for v in layer:
                if v in self._layer_of:
                    raise ValueError(f"node {v} appears in two layers")
                self._layer_of[v] = k
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            ls, ld = self._layer_of.get(e.src), self._layer_of.get(e.dst)
            if ls is None or ld is None:
                raise ValueError(f"edge {e} references an unknown node")
            if ld != ls + 1:
                raise ValueError(f"edge {e} does not join consecutive layers")
            if e.var is not None and not 0 <= e.var < n:
                raise ValueError(f"edge {e} reads variable outside [0, {n})")
            es.append(Edge(e.src, e.dst, e.var, e.coeff % p))
        self.edges = tuple(es)
        self._out: dict[int, list[Edge]] = {v: [] for v in self._layer_of}
        self._in: dict[int, list[Edge]] = {v: [] for v in self._layer_of}
        for e in self.edges:
            self._out[e.src].append(e)
            self._in[e.dst].append(e)

    @property
    def s(self) -> int:
        return self.layers[0][0]

    @property
    def t(self) -> int:
        return self.layers[-1][0]

    @property
    def size(self) -> int:
        return len(self._layer_of)

    @property
    def width(self) -> int:
        return max(len(layer) for layer in self.layers)

    @property
    def nodes(self) -> list[int]:
        return [v for layer in self.layers for v in layer]

    def layer_of(self, v: int) -> int:
        return self._layer_of[v]

    def out_edges(self, v: int) -> list[Edge]:
        return self._out[v]

    def in_edges(self, v: int) -> list[Edge]:
        return self._in[v]

    def __repr__(self) -> str:
        return f"Abp(n={self.n}, layers={len(self.layers)}, size={self.size}, edges={len(self.edges)})"

    # reachability and variable sets
    def forward_reach(self) -> set[int]:
        seen = {self.s}
        for layer in self.layers:
            for v in layer:
                if v in seen:
                    for e in self._out[v]:
                        seen.add(e.dst)
        return seen

    def backward_reach(self) -> set[int]:
        seen = {self.t}
        for layer in reversed(self.layers):
            for v in layer:
                if v in seen:
                    for e in self._in[v]:
                        seen.add(e.src)
        return seen

    def useful_nodes(self) -> set[int]:
        return self.forward_reach() & self.backward_reach()

    def prune(self) -> Abp:
        """Drop nodes that lie on no s-t path (a program with no path becomes ``s -> t`` with no edges)."""
        keep = self.useful_nodes()
        if self.t not in keep:
            return Abp(self.n, [[self.s], [self.t]], [], self.p)
        layers = [[v for v in layer if v in keep] for layer in self.layers]
        edges = [e for e in self.edges if e.src in keep and e.dst in keep]
        return Abp(self.n, layers, edges, self.p)

    def vars_before(self) -> dict[int, int]:
        """For each node v, bitmask of variables on some s -> v path."""
        out = {v: 0 for v in self._layer_of}
        for layer in self.layers:
            for v in layer:
                m = out[v]
                for e in self._out[v]:
                    out[e.dst] |= m | (0 if e.var is None else 1 << e.var)
        return out

    def vars_after(self) -> dict[int, int]:
        """For each node v, bitmask of variables on some v -> t path."""
        out = {v: 0 for v in self._layer_of}
        for layer in reversed(self.layers):
            for v in layer:
                m = out[v]
                for e in self._in[v]:
                    out[e.src] |= m | (0 if e.var is None else 1 << e.var)
        return out

    # semantics
    def expand(self) -> MultilinearPoly:
        """Exact polynomial via a layer-by-layer dynamic program."""
        from .validate import check_syntactic_multilinear

        if self.n > MAX_EXPAND_VARS:
            raise ValueError(f"expansion limited to n <= {MAX_EXPAND_VARS}")
        rep = check_syntactic_multilinear(self)
        if not rep.verdict:
            raise NonMultilinear(f"path repeats a variable: {rep.witness}")
        P = self.prune()
        n, p = P.n, P.p
        acc: dict[int, dict[int, int]] = {P.s: {0: 1}}
        for layer in P.layers[:-1]:
            for v in layer:
                poly = acc.pop(v, None)
                if not poly:
                    continue
                for e in P._out[v]:
                    tgt = acc.setdefault(e.dst, {})
                    if e.var is None:
                        for m, c in poly.items():
                            tgt[m] = (tgt.get(m, 0) + c * e.coeff) % p
                    else:
                        bit = 1 << e.var
                        for m, c in poly.items():
                            tgt[m | bit] = (tgt.get(m | bit, 0) + c * e.coeff) % p
        return MultilinearPoly(n, acc.get(P.t, {}), p)

    def eval(self, point: Sequence[int]) -> int:
        if len(point) != self.n:
            raise ValueError(f"point has length {len(point)}, expected {self.n}")
        p = self.p
        val = {self.s: 1}
        for layer in self.layers[:-1]:
            for v in layer:
                a = val.get(v)
                if not a:
                    continue
                for e in self._out[v]:
                    w = e.coeff if e.var is None else e.coeff * point[e.var]
                    val[e.dst] = (val.get(e.dst, 0) + a * w) % p
        return val.get(self.t, 0) % p

    # structural operations
    def reverse(self) -> Abp:
        """Reverse every edge and swap source and sink; the polynomial is unchanged."""
        return Abp(
            self.n,
            list(reversed(self.layers)),
            [Edge(e.dst, e.src, e.var, e.coeff) for e in self.edges],
            self.p,
        )

    def relabel(self, start: int = 0) -> Abp:
        """Renumber nodes consecutively in layer order."""
        mapping = {}
        for layer in self.layers:
            for v in layer:
                mapping[v] = start + len(mapping)
        return Abp(
            self.n,
            [[mapping[v] for v in layer] for layer in self.layers],
            [Edge(mapping[e.src], mapping[e.dst], e.var, e.coeff) for e in self.edges],
            self.p,
        )

    def scale(self, c: int) -> Abp:
        """Multiply the computed polynomial by ``c`` (scales the edges leaving s)."""
        s = self.s
        return Abp(
            self.n,
            self.layers,
            [Edge(e.src, e.dst, e.var, e.coeff * c) if e.src == s else e for e in self.edges],
            self.p,
        )

    # JSON
    def to_json(self) -> dict:
        edges = []
        for e in sorted(self.edges, key=lambda e: (e.src, e.dst, -1 if e.var is None else e.var, e.coeff)):
            d = {"from": e.src, "to": e.dst, "coeff": e.coeff}
            if e.var is not None:
                d["var"] = e.var
            edges.append(d)
        return {
            "kind": "abp",
            "n": self.n,
            "p": self.p,
            "layers": [sorted(layer) for layer in self.layers],
            "edges": edges,
        }

    @classmethod
    def from_json(cls, data) -> Abp:
        edges = [Edge(int(e["from"]), int(e["to"]), None if e.get("var") is None else int(e["var"]), int(e.get("coeff", 1)))
                 for e in data["edges"]]
        return cls(int(data["n"]), data["layers"], edges, int(data.get("p", DEFAULT_PRIME)))


def abp_expand(P: Abp) -> MultilinearPoly:
    return P.expand()


def path_abp(n: int, reads: Sequence[int | None], coeffs: Sequence[int] | None = None, p: int = DEFAULT_PRIME) -> Abp:
    """Single-path program reading ``reads`` in order (``None`` = constant edge)."""
    coeffs = coeffs or [1] * len(reads)
    layers = [[k] for k in range(len(reads) + 1)]
    edges = [Edge(k, k + 1, r, c) for k, (r, c) in enumerate(zip(reads, coeffs))]
    return Abp(n, layers, edges, p)
