"""Structural validators for formulas and branching programs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from .abp import Abp
from .formula import Const, Formula, Prod, Sum, Var, iter_nodes, node_span, node_vars

Span = tuple[int, int] | None


@dataclass(frozen=True)
class StructReport:
    verdict: bool
    witness: Any = None
    data: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.verdict and self.witness is not None:
            raise ValueError("a passing report carries no witness")
        if not self.verdict and self.witness is None:
            raise ValueError("a failing report needs a witness")

    def __bool__(self) -> bool:
        return self.verdict


def _ok(**data) -> StructReport:
    return StructReport(True, None, data)


def _fail(witness, **data) -> StructReport:
    return StructReport(False, witness, data)


def span_of_mask(mask: int) -> Span:
    if not mask:
        return None
    return ((mask & -mask).bit_length() - 1, mask.bit_length() - 1)


def spans_disjoint(a: Span, b: Span) -> bool:
    if a is None or b is None:
        return True
    return a[1] < b[0] or b[1] < a[0]


# syntactic multilinearity

def check_syntactic_multilinear(model: Formula | Abp) -> StructReport:
    if isinstance(model, Formula):
        for path, nd in iter_nodes(model.root):
            if isinstance(nd, Prod):
                used = 0
                for i, ch in enumerate(nd.children):
                    m = node_vars(ch)
                    if used & m:
                        return _fail({"gate": path, "child": i, "shared_mask": used & m})
                    used |= m
        return _ok()
    P = model.prune()
    before = P.vars_before()
    for e in P.edges:
        if e.var is not None and before[e.src] >> e.var & 1:
            return _fail({"edge": (e.src, e.dst), "var": e.var})
    return _ok()


# read counts

def read_counts(F: Formula) -> Counter:
    return Counter(nd.index for _, nd in iter_nodes(F.root) if isinstance(nd, Var))


def check_read_k(F: Formula) -> int:
    counts = read_counts(F)
    return max(counts.values(), default=0)


def check_rof(F: Formula) -> StructReport:
    for var, k in sorted(read_counts(F).items()):
        if k > 1:
            return _fail({"var": var, "reads": k})
    return _ok()


# oblivious read-once programs

def check_oblivious_roabp(P: Abp) -> StructReport:
    """Verdict plus ``data['order']``: variables in the order their layers read them."""
    order: list[int] = []
    layer_vars: list[int | None] = []
    seen: dict[int, int] = {}
    out = {k: set() for k in range(len(P.layers) - 1)}
    for e in P.edges:
        if e.var is not None:
            out[P.layer_of(e.src)].add(e.var)
    for k in range(len(P.layers) - 1):
        vs = out[k]
        if len(vs) > 1:
            return _fail({"layer": k, "vars": sorted(vs)})
        if vs:
            (v,) = vs
            if v in seen:
                return _fail({"var": v, "layers": (seen[v], k)})
            seen[v] = k
            order.append(v)
            layer_vars.append(v)
        else:
            layer_vars.append(None)
    return _ok(order=order, layer_vars=layer_vars)


# strict-interval programs (identity variable order)

def interval_map(P: Abp) -> dict[tuple[int, int], Span]:
    """Covering span of X_uv for every ordered pair with a u -> v path (u != v)."""
    P = P.prune()
    result: dict[tuple[int, int], Span] = {}
    order = P.nodes
    for u in order:
        masks = {u: 0}
        for layer in P.layers[P.layer_of(u):]:
            for v in layer:
                if v not in masks:
                    continue
                m = masks[v]
                for e in P.out_edges(v):
                    add = m | (0 if e.var is None else 1 << e.var)
                    masks[e.dst] = masks.get(e.dst, 0) | add
        for v, m in masks.items():
            if v != u:
                result[(u, v)] = span_of_mask(m)
    return result


def check_strict_interval(P: Abp) -> StructReport:
    """Verdict plus ``data['intervals']`` (the map I_uv) on success.

    Subprogram variable sets grow towards s and t, so the condition on every
    consecutive pair [u,v],[v,w] reduces to the pair [s,v],[v,t].
    """
    sm = check_syntactic_multilinear(P)
    if not sm.verdict:
        return _fail({"reason": "not syntactic multilinear", **sm.witness})
    Q = P.prune()
    before, after = Q.vars_before(), Q.vars_after()
    for v in Q.nodes:
        a, b = span_of_mask(before[v]), span_of_mask(after[v])
        if not spans_disjoint(a, b):
            return _fail({"triple": (Q.s, v, Q.t), "before": a, "after": b})
    return _ok(intervals=interval_map(Q))


def check_strict_interval_bruteforce(P: Abp) -> bool:
    """Literal check over all triples u -> v -> w; cubic, used as a test oracle."""
    if not check_syntactic_multilinear(P).verdict:
        return False
    imap = interval_map(P)
    by_start: dict[int, list[tuple[int, Span]]] = {}
    for (u, v), sp in imap.items():
        by_start.setdefault(u, []).append((v, sp))
    for (u, v), sp in imap.items():
        for w, sp2 in by_start.get(v, []):
            if not spans_disjoint(sp, sp2):
                return False
    return True


# interval formulas

def check_interval_formula(F: Formula) -> StructReport:
    """Verdict plus ``data['spans']``: covering interval per gate path."""
    spans: dict[tuple, Span] = {}

    def visit(nd, path) -> Span | StructReport:
        if isinstance(nd, Var):
            sp: Span = (nd.index, nd.index)
        elif isinstance(nd, Const):
            sp = None
        else:
            kid_spans = []
            for i, ch in enumerate(nd.children):
                r = visit(ch, path + (i,))
                if isinstance(r, StructReport):
                    return r
                kid_spans.append(r)
            if isinstance(nd, Prod):
                for i in range(len(kid_spans)):
                    for j in range(i + 1, len(kid_spans)):
                        if not spans_disjoint(kid_spans[i], kid_spans[j]):
                            return _fail({"gate": path, "children": (i, j),
                                          "spans": (kid_spans[i], kid_spans[j])})
            present = [s for s in kid_spans if s is not None]
            sp = (min(s[0] for s in present), max(s[1] for s in present)) if present else None
        spans[path] = sp
        return sp

    r = visit(F.root, ())
    if isinstance(r, StructReport):
        return r
    return _ok(spans=spans)


# gate census for read-once formula rank bounds

@dataclass(frozen=True)
class GateCensus:
    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    a_one: int = 0
    a_two: int = 0

    def __post_init__(self) -> None:
        if self.a != self.a_one + self.a_two:
            raise ValueError("a must equal a_one + a_two")
        if min(self.a, self.b, self.c, self.d, self.a_one, self.a_two) < 0:
            raise ValueError("counts must be non-negative")

    def log2_rank_bound(self) -> float:
        """Exponent of the read-once rank bound 2^(a'' + 2a'/3 + 2b/3 + 9c/20)."""
        return self.a_two + 2 * self.a_one / 3 + 2 * self.b / 3 + 9 * self.c / 20


def gate_census(F: Formula, phi) -> GateCensus:
    """Classify gates with at least one variable input (types A-D).

    ``phi`` is a :class:`~boundedread.partitions.Partition`; each type-A gate
    is split by the rank (1 or 2) of its own polynomial under ``phi``.
    """
    from .rank import rank_of

    counts = dict(a=0, b=0, c=0, d=0, a_one=0, a_two=0)
    for _, nd in iter_nodes(F.root):
        if not isinstance(nd, (Sum, Prod)):
            continue
        if len(nd.children) != 2:
            raise ValueError("gate_census needs a binary formula; call binarize() first")
        nvars = sum(isinstance(ch, Var) for ch in nd.children)
        if nvars == 0:
            continue
        if isinstance(nd, Sum):
            if nvars == 2:
                counts["a"] += 1
                local = Formula(nd, F.n, F.p).expand()
                if rank_of(local, phi) >= 2:
                    counts["a_two"] += 1
                else:
                    counts["a_one"] += 1
            else:
                counts["c"] += 1
        else:
            counts["b" if nvars == 2 else "d"] += 1
    return GateCensus(**counts)


def internal_gate_count(F: Formula) -> int:
    return sum(1 for _, nd in iter_nodes(F.root) if isinstance(nd, (Sum, Prod)))
