"""Model transformations.

Strict-interval ABP to ROABP: classify nodes as ascending/descending, split the
program into the two one-ordered parts, re-layer each part so that every
variable has its own layer, and add the two resulting ROABPs.

Interval formulas: separator-based depth reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .abp import Abp, Edge
from .formula import (
    Const,
    Formula,
    Node,
    Path,
    Prod,
    Sum,
    binarize_node,
    children,
    fold_constants,
    node_size,
    node_span,
    replace_at,
    subtree_at,
)
from .validate import check_interval_formula, check_oblivious_roabp, check_strict_interval, span_of_mask

ASC = "asc"
DESC = "desc"


class TransformError(ValueError):
    pass


@dataclass(frozen=True)
class NodeClass:
    """Tags for the non-terminal nodes of a pruned program.

    ``front_free``/``back_free`` hold nodes with no variable on any path from s
    (resp. to t); such nodes carry the Ascending tag by convention.
    """

    tags: dict
    front_free: frozenset
    back_free: frozenset

    @property
    def free(self) -> frozenset:
        return self.front_free | self.back_free

    def strict(self, tag: str) -> frozenset:
        return frozenset(v for v, tg in self.tags.items() if tg == tag and v not in self.free)


def classify_nodes(P: Abp) -> NodeClass:
    rep = check_strict_interval(P)
    if not rep.verdict:
        raise TransformError(f"not a strict-interval ABP: {rep.witness}")
    Q = P.prune()
    before, after = Q.vars_before(), Q.vars_after()
    tags, front, back = {}, set(), set()
    for v in Q.nodes:
        if v in (Q.s, Q.t):
            continue
        a, b = span_of_mask(before[v]), span_of_mask(after[v])
        if a is None or b is None:
            tags[v] = ASC
            (front if a is None else back).add(v)
            continue
        asc, desc = a[1] < b[0], b[1] < a[0]
        if asc == desc:
            raise TransformError(f"node {v} is {'both' if asc else 'neither'} ascending and descending")
        tags[v] = ASC if asc else DESC
    return NodeClass(tags, frozenset(front), frozenset(back))


def _induced(P: Abp, keep: set[int], drop_edge=lambda e: False) -> Abp:
    layers = [[v for v in layer if v in keep] for layer in P.layers]
    if any(not layer for layer in layers):
        return Abp(P.n, [[P.s], [P.t]], [], P.p)
    edges = [e for e in P.edges if e.src in keep and e.dst in keep and not drop_edge(e)]
    return Abp(P.n, layers, edges, P.p).prune()


def split_asc_desc(P: Abp, cls: NodeClass | None = None) -> tuple[Abp, Abp]:
    """``P = P1 + P2`` with P1 free of descending nodes and P2 free of ascending ones.

    Nodes with an empty side are shared. Paths through shared nodes only read
    at most one variable; P1 keeps them and P2 drops them by removing every
    edge from a front-free node (or s) straight to a back-free node (or t).
    """
    Q = P.prune()
    cls = cls or classify_nodes(Q)
    term = {Q.s, Q.t}
    strict_desc = cls.strict(DESC)
    strict_asc = cls.strict(ASC)
    p1_nodes = {v for v in Q.nodes if v not in strict_desc}
    p2_nodes = {v for v in Q.nodes if v not in strict_asc}
    heads = cls.front_free | {Q.s}
    tails = cls.back_free | {Q.t}
    P1 = _induced(Q, p1_nodes | term)
    P2 = _induced(Q, p2_nodes | term, lambda e: e.src in heads and e.dst in tails)
    return P1, P2


def reverse_abp(P: Abp) -> Abp:
    return P.reverse()


def _constant_closure(P: Abp, start: int) -> dict[int, int]:
    """Total weight of constant-only paths from ``start`` to every node."""
    p = P.p
    acc = {start: 1}
    for layer in P.layers[P.layer_of(start):]:
        for v in layer:
            w = acc.get(v)
            if not w:
                continue
            for e in P.out_edges(v):
                if e.var is None:
                    acc[e.dst] = (acc.get(e.dst, 0) + w * e.coeff) % p
    return acc


def one_order_to_roabp(P: Abp, direction: str = ASC, order: Sequence[int] | None = None) -> Abp:
    """Re-layer a one-ordered program so that layer k reads only ``order[k]``.

    ``direction='desc'`` reverses the program first. The state in layer k is
    the head of the last variable edge taken (or s if none), copies are indexed
    by layer, and skipped variables become constant-1 pass-through edges.
    """
    if direction == DESC:
        P = P.reverse()
    elif direction != ASC:
        raise ValueError(f"direction must be {ASC!r} or {DESC!r}")
    P = P.prune()
    n, p = P.n, P.p
    order = list(range(n)) if order is None else list(order)
    pos = {v: k for k, v in enumerate(order)}
    if len(pos) != len(order):
        raise ValueError("order repeats a variable")

    # every path must read variables in increasing position
    last_pos: dict[int, int] = {v: -1 for v in P.nodes}
    for layer in P.layers:
        for v in layer:
            for e in P.out_edges(v):
                if e.var is None:
                    cand = last_pos[v]
                else:
                    if e.var not in pos:
                        raise TransformError(f"variable {e.var} missing from order")
                    if pos[e.var] <= last_pos[v]:
                        raise TransformError(f"edge {e} reads out of order (mixed classification)")
                    cand = pos[e.var]
                if cand > last_pos[e.dst]:
                    last_pos[e.dst] = cand

    var_edges: dict[int, list[Edge]] = {}
    for e in P.edges:
        if e.var is not None:
            var_edges.setdefault(e.var, []).append(e)
    heads = sorted({e.dst for es in var_edges.values() for e in es}, key=lambda v: (P.layer_of(v), v))
    closure = {a: _constant_closure(P, a) for a in [P.s] + heads}
    s, t = P.s, P.t
    L = len(order)
    if L == 0:
        c = closure[s].get(t, 0)
        return Abp(n, [[0], [1]], [Edge(0, 1, None, c)] if c else [], p)

    ids: dict[tuple[int, int], int] = {}

    def nid(state: int, layer: int) -> int:
        return ids.setdefault((state, layer), len(ids))

    src_id = nid(s, 0)
    sink_id = -1  # assigned after the middle layers
    edges: list[tuple[tuple[int, int], object, int | None, int]] = []
    current = [s]
    for k in range(L):
        var = order[k]
        last = k == L - 1
        nxt: list[int] = []
        for a in current:
            ca = closure[a]
            # skip the variable
            if last:
                w = ca.get(t, 0)
                if w:
                    edges.append(((a, k), "t", None, w))
            else:
                edges.append(((a, k), (a, k + 1), None, 1))
                if a not in nxt:
                    nxt.append(a)
            # read the variable through one of its edges
            gained: dict[int, int] = {}
            for e in var_edges.get(var, ()):
                cu = ca.get(e.src, 0)
                if cu:
                    gained[e.dst] = (gained.get(e.dst, 0) + cu * e.coeff) % p
            if last:
                tot = sum(w * closure[v].get(t, 0) for v, w in gained.items()) % p
                if tot:
                    edges.append(((a, k), "t", var, tot))
            else:
                for v, w in gained.items():
                    if w:
                        edges.append(((a, k), (v, k + 1), var, w))
                        if v not in nxt:
                            nxt.append(v)
        current = nxt
    layers: list[list[int]] = [[] for _ in range(L)]
    for (state, k) in [key for key, _, _, _ in edges] + [d for _, d, _, _ in edges if d != "t"]:
        i = nid(state, k)
        if i not in layers[k]:
            layers[k].append(i)
    sink_id = len(ids)
    layers.append([sink_id])
    layers[0] = [src_id]
    out = [Edge(nid(*a), sink_id if d == "t" else nid(*d), var, w) for a, d, var, w in edges]
    return Abp(n, layers, out, p).prune().relabel()


def parallel_sum(P1: Abp, P2: Abp) -> Abp:
    """Share s and t of two programs with the same number of layers."""
    if len(P1.layers) != len(P2.layers):
        raise TransformError("programs have different layer counts")
    if P1.n != P2.n or P1.p != P2.p:
        raise TransformError("programs disagree on n or p")
    A = P1.relabel(0)
    B = P2.relabel(A.size)
    remap = {B.s: A.s, B.t: A.t}
    layers = [list(la) for la in A.layers]
    for k in range(1, len(B.layers) - 1):
        layers[k] += list(B.layers[k])
    edges = list(A.edges) + [Edge(remap.get(e.src, e.src), remap.get(e.dst, e.dst), e.var, e.coeff) for e in B.edges]
    return Abp(A.n, layers, edges, A.p).relabel()


def _is_empty(P: Abp) -> bool:
    return not P.prune().edges


def zero_abp(n: int, p: int) -> Abp:
    return Abp(n, [[0], [1]], [], p)


def _layer_vars(P: Abp) -> list[int | None]:
    rep = check_oblivious_roabp(P)
    if not rep.verdict:
        raise TransformError(f"not a ROABP: {rep.witness}")
    return rep.data["layer_vars"]


def sum_roabps(P1: Abp, P2: Abp) -> Abp:
    """ROABP for the sum of two ROABPs that read variables in the same order."""
    o1 = check_oblivious_roabp(P1)
    o2 = check_oblivious_roabp(P2)
    if not (o1.verdict and o2.verdict):
        raise TransformError("both operands must be ROABPs")
    if _is_empty(P1):
        return P2
    if _is_empty(P2):
        return P1
    ord1, ord2 = o1.data["order"], o2.data["order"]
    merged = _merge_orders(ord1, ord2)
    lv1, lv2 = o1.data["layer_vars"], o2.data["layer_vars"]
    if len(lv1) == len(lv2) and all(a is None or b is None or a == b for a, b in zip(lv1, lv2)):
        return parallel_sum(P1, P2)
    # different layer structure: re-layer both on the common order
    R1 = one_order_to_roabp(P1, ASC, merged)
    R2 = one_order_to_roabp(P2, ASC, merged)
    if _is_empty(R1):
        return R2
    if _is_empty(R2):
        return R1
    return parallel_sum(R1, R2)


def _merge_orders(a: list[int], b: list[int]) -> list[int]:
    """Common order extending both read orders; raises if they conflict."""
    pos_a = {v: i for i, v in enumerate(a)}
    shared = [v for v in b if v in pos_a]
    if [v for v in a if v in set(shared)] != shared:
        raise TransformError("operands read shared variables in different orders")
    out: list[int] = []
    i = j = 0
    while i < len(a) or j < len(b):
        if j < len(b) and b[j] not in pos_a:
            out.append(b[j])
            j += 1
        elif i < len(a):
            v = a[i]
            out.append(v)
            i += 1
            if j < len(b) and b[j] == v:
                j += 1
        else:
            j += 1
    return out


def strict_interval_to_roabp(P: Abp) -> Abp:
    """ROABP in the order ``x_0, ..., x_{n-1}`` computing the same polynomial."""
    rep = check_strict_interval(P)
    if not rep.verdict:
        raise TransformError(f"not a strict-interval ABP: {rep.witness}")
    Q = P.prune()
    if not Q.edges:
        return zero_abp(P.n, P.p)
    P1, P2 = split_asc_desc(Q)
    parts = []
    if not _is_empty(P1):
        parts.append(one_order_to_roabp(P1, ASC))
    if not _is_empty(P2):
        parts.append(one_order_to_roabp(P2, DESC))
    parts = [R for R in parts if not _is_empty(R)]
    if not parts:
        return zero_abp(P.n, P.p)
    if len(parts) == 1:
        return parts[0]
    return parallel_sum(parts[0], parts[1])


# depth reduction for interval formulas

def find_tree_separator(F: Formula | Node) -> Path:
    """Path to a gate whose subtree size lies in ``(s/3, 2s/3]``.

    Walks from the root into the larger child (first one on ties) while the
    current subtree is above ``2s/3``.
    """
    root = F.root if isinstance(F, Formula) else F
    s = node_size(root)
    if s < 3:
        raise TransformError(f"formula of size {s} has no separator")
    path: Path = ()
    cur = root
    while 3 * node_size(cur) > 2 * s:
        kids = children(cur)
        sizes = [node_size(ch) for ch in kids]
        i = sizes.index(max(sizes))
        path += (i,)
        cur = kids[i]
    return path


def path_factors(root: Node, path: Path) -> tuple[list[Node], list[Node]]:
    """Product siblings met on the way to ``path``, split by side.

    A sibling goes left when its span ends before the on-path child's span
    starts, right when it starts after; constant siblings go left.
    Siblings of sum gates are dropped (they vanish in the coefficient of the
    separator gate).
    """
    left: list[Node] = []
    right: list[Node] = []
    cur = root
    for i in path:
        kids = children(cur)
        if isinstance(cur, Prod):
            on = node_span(kids[i])
            for j, h in enumerate(kids):
                if j == i:
                    continue
                sp = node_span(h)
                if sp is not None and on is not None and sp[0] > on[1]:
                    right.append(h)
                else:
                    left.append(h)
        cur = kids[i]
    return left, right


def _piece_key(nd: Node) -> int:
    sp = node_span(nd)
    return -1 if sp is None else sp[0]


def _reduce(root: Node, p: int) -> Node:
    root = binarize_node(fold_constants(root, p))
    if node_size(root) < 3:
        return root
    path = find_tree_separator(root)
    g = subtree_at(root, path)
    left, right = path_factors(root, path)
    pieces = [_reduce(h, p) for h in left + right] + [_reduce(g, p)]
    pieces = [nd for nd in pieces if not (isinstance(nd, Const) and nd.value % p == 1)]
    if any(isinstance(nd, Const) and nd.value % p == 0 for nd in pieces):
        top: Node | None = None
    elif not pieces:
        top = Const(1)
    elif len(pieces) == 1:
        top = pieces[0]
    else:
        top = Prod(tuple(sorted(pieces, key=_piece_key)))
    rest = fold_constants(replace_at(root, path, Const(0)), p)
    rest_red = None if isinstance(rest, Const) and rest.value == 0 else _reduce(rest, p)
    terms = [nd for nd in (top, rest_red) if nd is not None]
    if not terms:
        return Const(0)
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def depth_reduce_interval(F: Formula) -> Formula:
    """Interval formula for the same polynomial with depth ``O(log s)``.

    Splits at a separator gate g: the output is (product of g's product
    siblings along the root path) * g + F|_{g=0}, each part reduced
    recursively. Every part has at most ``2s/3`` nodes.
    """
    rep = check_interval_formula(F)
    if not rep.verdict:
        raise TransformError(f"not an interval formula: {rep.witness}")
    return F.with_root(_reduce(F.root, F.p))


def depth_bound(s: int) -> float:
    """``2 log_{3/2}(s) + 4``, the depth allowance checked in tests."""
    return 2 * math.log(max(s, 1), 1.5) + 4
