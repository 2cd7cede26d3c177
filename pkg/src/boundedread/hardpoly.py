"""Explicit full-rank polynomials and seeded random model generators."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from typing import Mapping, Sequence

from .abp import Abp, Edge
from .field import DEFAULT_PRIME
from .formula import Const, Formula, Prod, Sum, Var
from .partitions import BlockStructure, Pairing, arc_pairing_from_moves, arc_step
from .poly import MultilinearPoly, bits
from .rng import SplitMix64

WAssignment = Mapping[tuple[int, int, int], int]

__all__ = [
    "BlockStructure",
    "ry_w_keys",
    "random_w",
    "gen_ry",
    "gen_pry",
    "gen_pry_formula",
    "enum_arc_pairings",
    "arc_sequence_multiplicities",
    "random_lambda",
    "gen_dmpy",
    "dmpy_tag_keys",
    "random_tags",
    "gen_dmpy_smabp",
    "random_rof",
    "random_roabp",
    "random_interval_formula",
    "random_strict_interval_abp",
]


# Raz-Yehudayoff polynomials

def ry_w_keys(varlist: Sequence[int]) -> list[tuple[int, int, int]]:
    """Auxiliary-variable keys ``(x_i, x_l, x_j)`` used by the recursion on ``varlist``."""
    m = len(varlist)
    keys = []
    for i in range(m):
        for j in range(i + 1, m, 2):
            for l in range(i + 1, j - 1, 2):
                keys.append((varlist[i], varlist[l], varlist[j]))
    return keys


def random_w(varlist: Sequence[int], rng: SplitMix64, p: int = DEFAULT_PRIME) -> dict:
    return {k: rng.nonzero_mod(p) for k in ry_w_keys(varlist)}


def gen_ry(varlist: Sequence[int], W: WAssignment, n: int | None = None, p: int = DEFAULT_PRIME) -> MultilinearPoly:
    """RY polynomial on the ordered variables ``varlist``.

    Empty intervals give 1 and single variables give 0; the split point l
    ranges over positions that leave both halves of even length.
    """
    m = len(varlist)
    if m % 2:
        raise ValueError(f"RY polynomial needs an even number of variables, got {m}")
    if n is None:
        n = max(varlist, default=-1) + 1
    one = MultilinearPoly.const(n, 1, p)

    @lru_cache(maxsize=None)
    def f(i: int, j: int) -> MultilinearPoly:
        if j < i:
            return one
        if j == i:
            return MultilinearPoly.zero(n, p)
        xi, xj = varlist[i], varlist[j]
        edge = MultilinearPoly(n, {0: 1, (1 << xi) | (1 << xj): 1}, p)
        acc = edge * f(i + 1, j - 1)
        for l in range(i + 1, j - 1, 2):
            key = (xi, varlist[l], xj)
            if key not in W:
                raise KeyError(f"missing auxiliary value w{key}")
            w = W[key] % p
            if w:
                acc = acc + (f(i, l) * f(l + 1, j)).scale(w)
        return acc

    return f(0, m - 1)


def gen_pry(bs: BlockStructure, W: WAssignment, p: int = DEFAULT_PRIME) -> MultilinearPoly:
    acc = MultilinearPoly.const(bs.n, 1, p)
    for block in bs.blocks:
        acc = acc * gen_ry(block, W, bs.n, p)
    return acc


def sop_node(f: MultilinearPoly) -> Sum | Prod | Var | Const:
    """Sum-of-products formula for ``f`` (one product per monomial)."""
    terms = []
    for mask in sorted(f.coeffs):
        coeff = f.coeff(mask)
        factors = [Var(i) for i in bits(mask)]
        if coeff != 1 or not factors:
            factors.insert(0, Const(coeff))
        terms.append(factors[0] if len(factors) == 1 else Prod(tuple(factors)))
    if not terms:
        return Const(0)
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def gen_pry_formula(bs: BlockStructure, W: WAssignment, p: int = DEFAULT_PRIME) -> Formula:
    """Product over blocks of dense sum-of-products block formulas."""
    blocks = [sop_node(gen_ry(block, W, bs.n, p)) for block in bs.blocks]
    root = blocks[0] if len(blocks) == 1 else Prod(tuple(blocks))
    return Formula(root, bs.n, p)


# arc pairings and the DMPY polynomial

MAX_ARC_N = 16


def _move_sequences(n: int):
    steps = n // 2 - 1
    seq = [0] * steps

    def rec(k):
        if k == steps:
            yield tuple(seq)
            return
        for mv in range(3):
            seq[k] = mv
            yield from rec(k + 1)

    yield from rec(0)


def arc_sequence_multiplicities(n: int) -> Counter:
    """Number of move sequences producing each arc pairing."""
    if n <= 0 or n % 2:
        raise ValueError(f"n={n} must be positive and even")
    if n > MAX_ARC_N:
        raise ValueError(f"enumeration limited to n <= {MAX_ARC_N}")
    counts: Counter = Counter()
    for moves in _move_sequences(n):
        pairs, _ = arc_pairing_from_moves(n, moves)
        counts[Pairing(n, tuple(pairs))] += 1
    return counts


def enum_arc_pairings(n: int) -> list[Pairing]:
    """Support of the arc-pairing process, sorted canonically."""
    return sorted(arc_sequence_multiplicities(n), key=lambda P: P.pairs)


def random_lambda(n: int, seed: int, p: int = DEFAULT_PRIME) -> dict:
    rng = SplitMix64(seed)
    return {P: rng.nonzero_mod(p) for P in enum_arc_pairings(n)}


def pairing_monomial(P: Pairing, p: int = DEFAULT_PRIME) -> MultilinearPoly:
    acc = MultilinearPoly.const(P.n, 1, p)
    for a, b in P.pairs:
        acc = acc * MultilinearPoly(P.n, {1 << a: 1, 1 << b: 1}, p)
    return acc


def gen_dmpy(n: int, lam: Mapping[Pairing, int], p: int = DEFAULT_PRIME) -> MultilinearPoly:
    acc = MultilinearPoly.zero(n, p)
    for P in enum_arc_pairings(n):
        if P not in lam:
            raise KeyError(f"missing lambda value for pairing {P.pairs}")
        acc = acc + pairing_monomial(P, p).scale(lam[P])
    return acc


def dmpy_tag_keys(n: int) -> list[tuple[int, int, int]]:
    """Keys ``(step, L, move)`` of the per-transition tags of the smABP."""
    keys = []
    states = {0}
    for step in range(1, n // 2):
        nxt = set()
        for L in sorted(states):
            R = (L + 2 * step - 1) % n
            for mv in range(3):
                keys.append((step, L, mv))
                _, L2, _ = arc_step(L, R, mv, n)
                nxt.add(L2)
        states = nxt
    return keys


def random_tags(n: int, seed: int, p: int = DEFAULT_PRIME) -> dict:
    rng = SplitMix64(seed)
    return {k: rng.nonzero_mod(p) for k in dmpy_tag_keys(n)}


def gen_dmpy_smabp(n: int, tags: Mapping[tuple[int, int, int], int] | None = None, p: int = DEFAULT_PRIME) -> Abp:
    """Syntactic multilinear ABP over arc states.

    A state after ``step`` pairs is the left end ``L`` of the covered arc.
    Each of the three moves is a pair of parallel edges ``mu * x_a`` and
    ``mu * x_b``, where ``mu = tags[(step, L, move)]`` (1 when ``tags`` is None).
    """
    if n <= 0 or n % 2:
        raise ValueError(f"n={n} must be positive and even")
    half = n // 2
    s, sink = 0, 1
    ids: dict[tuple[int, int], int] = {}
    layers: list[list[int]] = [[s]]
    edges: list[Edge] = []

    def state(step: int, L: int) -> int:
        if step == half:
            return sink
        return ids.setdefault((step, L), len(ids) + 2)

    first = state(1, 0)
    edges += [Edge(s, first, 0, 1), Edge(s, first, 1, 1)]
    states = [0]
    for step in range(1, half):
        layers.append([ids[(step, L)] for L in states])
        nxt: list[int] = []
        for L in states:
            R = (L + 2 * step - 1) % n
            for mv in range(3):
                (a, b), L2, _ = arc_step(L, R, mv, n)
                mu = 1 if tags is None else tags[(step, L, mv)]
                dst = state(step + 1, L2)
                edges += [Edge(ids[(step, L)], dst, a, mu), Edge(ids[(step, L)], dst, b, mu)]
                if step + 1 < half and L2 not in nxt:
                    nxt.append(L2)
        states = sorted(nxt)
    layers.append([sink])
    return Abp(n, layers, edges, p)


# random model generators

def _random_full_binary_shape(leaves: int, rng: SplitMix64) -> list:
    """Uniform full binary tree with ``leaves`` leaves (Remy's algorithm).

    Nodes are mutable lists of children; a leaf is an empty list.
    """
    root: list = []
    nodes = [root]
    for _ in range(leaves - 1):
        target = nodes[rng.below(len(nodes))]
        moved = list(target)  # takes over target's old children
        new_leaf: list = []
        target[:] = [moved, new_leaf] if rng.coin() else [new_leaf, moved]
        nodes += [moved, new_leaf]
    return root


def random_rof(n: int, seed: int, p: int = DEFAULT_PRIME, leaf_constants: bool = False) -> Formula:
    """Read-once formula over all ``n`` variables on a uniform binary tree shape."""
    if n <= 0:
        raise ValueError("n must be positive")
    rng = SplitMix64(seed)
    shape = _random_full_binary_shape(n, rng)
    order = list(range(n))
    rng.shuffle(order)
    it = iter(order)

    def build(nd):
        if not nd:
            leaf = Var(next(it))
            if leaf_constants and rng.below(4) == 0:
                return Prod((Const(rng.nonzero_mod(p)), leaf))
            return leaf
        kids = tuple(build(ch) for ch in nd)
        return Sum(kids) if rng.coin() else Prod(kids)

    return Formula(build(shape), n, p)


def random_roabp(n: int, width: int, seed: int, p: int = DEFAULT_PRIME, order: Sequence[int] | None = None,
                 shuffle_order: bool = True) -> Abp:
    """Random ROABP reading every variable once, layer widths in ``[1, width]``."""
    if n <= 0 or width <= 0:
        raise ValueError("n and width must be positive")
    rng = SplitMix64(seed)
    if order is None:
        order = list(range(n))
        if shuffle_order:
            rng.shuffle(order)
    widths = [1] + [1 + rng.below(width) for _ in range(n - 1)] + [1]
    layers, nid = [], 0
    for w in widths:
        layers.append(list(range(nid, nid + w)))
        nid += w
    edges = []
    for k in range(n):
        var = order[k]
        src, dst = layers[k], layers[k + 1]
        has_out = {u: False for u in src}
        has_in = {v: False for v in dst}
        for u in src:
            for v in dst:
                kind = rng.below(4)  # none, const, var, both
                if kind in (1, 3):
                    edges.append(Edge(u, v, None, rng.nonzero_mod(p)))
                if kind in (2, 3):
                    edges.append(Edge(u, v, var, rng.nonzero_mod(p)))
                if kind:
                    has_out[u] = has_in[v] = True
        read = False
        for u in src:
            if not has_out[u]:
                edges.append(Edge(u, rng.choice(dst), var, rng.nonzero_mod(p)))
                read = True
        for v in dst:
            if not has_in[v]:
                edges.append(Edge(rng.choice(src), v, var, rng.nonzero_mod(p)))
                read = True
        if not read and not any(e.var == var for e in edges[-len(src) * len(dst) * 2:]):
            edges.append(Edge(rng.choice(src), rng.choice(dst), var, rng.nonzero_mod(p)))
    return Abp(n, layers, edges, p)


def _split_budget(total: int, parts: int, rng: SplitMix64) -> list[int]:
    out = [1] * parts
    for _ in range(total - parts):
        out[rng.below(parts)] += 1
    return out


def random_interval_formula(n: int, size: int, seed: int, p: int = DEFAULT_PRIME, const_prob: float = 0.1) -> Formula:
    """Interval formula of at most ``size`` nodes over ``x_0 .. x_{n-1}``.

    Product children live on consecutive disjoint subintervals; sum children on
    arbitrary (possibly overlapping) subintervals of the parent's interval.
    """
    if n <= 0 or size <= 0:
        raise ValueError("n and size must be positive")
    rng = SplitMix64(seed)
    threshold = int(const_prob * 1024)

    def leaf(lo, hi):
        if rng.below(1024) < threshold:
            return Const(rng.nonzero_mod(p))
        return Var(rng.randint(lo, hi))

    def build(lo, hi, budget):
        if budget < 3:
            return leaf(lo, hi)
        width = hi - lo + 1
        max_kids = min(3, budget - 1)
        if width >= 2 and rng.coin():
            k = 2 + rng.below(min(max_kids, width) - 1)
            cuts = sorted(rng.randint(lo + 1, hi) for _ in range(k - 1))
            # distinct cut points give nonempty consecutive parts
            cuts = sorted(set(cuts))
            bounds = [lo] + cuts + [hi + 1]
            k = len(bounds) - 1
            budgets = _split_budget(budget - 1, k, rng)
            return Prod(tuple(build(bounds[i], bounds[i + 1] - 1, budgets[i]) for i in range(k)))
        k = 2 + rng.below(max_kids - 1)
        budgets = _split_budget(budget - 1, k, rng)
        kids = []
        for b in budgets:
            a = rng.randint(lo, hi)
            c = rng.randint(lo, hi)
            kids.append(build(min(a, c), max(a, c), b))
        return Sum(tuple(kids))

    return Formula(build(0, n - 1, size), n, p)


def _one_ordered_layers(n: int, transitions: int, nodes: int, rng: SplitMix64, start_id: int):
    """Interior layers of an ascending one-ordered part.

    Every interior node gets a cut point; an edge u -> v may read a variable
    in ``[cut(u), cut(v))``, so paths read indices in increasing order.
    """
    budgets = _split_budget(nodes, transitions - 1, rng)
    layer_nodes: list[list[int]] = []
    cut: dict[int, int] = {}
    nid = start_id
    for ell, cnt in enumerate(budgets, start=1):
        lo = (n * (ell - 1)) // transitions
        hi = min(n, (n * (ell + 1)) // transitions)
        ids = []
        for _ in range(cnt):
            cut[nid] = rng.randint(lo, hi)
            ids.append(nid)
            nid += 1
        layer_nodes.append(ids)
    return layer_nodes, cut, nid


def random_strict_interval_abp(n: int, size: int, seed: int, p: int = DEFAULT_PRIME, const_prob: float = 0.15) -> Abp:
    """Ascending and descending one-ordered programs glued at s and t.

    ``size`` bounds the node count before pruning.
    """
    if n <= 0 or size < 3:
        raise ValueError("need n >= 1 and size >= 3")
    rng = SplitMix64(seed)
    threshold = int(const_prob * 1024)
    s, t = 0, 1
    for _attempt in range(256):
        interior = size - 2
        m = 2 + rng.below(max(1, min(n + 1, interior)))  # layer transitions
        slots = m - 1
        n_asc = rng.below(interior + 1)
        n_desc = interior - n_asc
        parts = []
        nid = 2
        for count, mirror in ((n_asc, False), (n_desc, True)):
            if count >= slots:
                lays, cut, nid = _one_ordered_layers(n, m, count, rng, nid)
                parts.append((lays, cut, mirror))
        if not parts:
            continue
        edges: list[Edge] = []
        for lays, cut, mirror in parts:
            full = [[(s, 0)]] + [[(v, cut[v]) for v in lay] for lay in lays] + [[(t, n)]]
            for k in range(len(full) - 1):
                for v, cv in full[k + 1]:
                    cands = [(u, cu) for u, cu in full[k] if cu <= cv]
                    if not cands:
                        continue
                    for _ in range(1 + rng.below(2)):
                        u, cu = rng.choice(cands)
                        if cu == cv or rng.below(1024) < threshold:
                            edges.append(Edge(u, v, None, rng.nonzero_mod(p)))
                        else:
                            i = rng.randint(cu, cv - 1)
                            edges.append(Edge(u, v, n - 1 - i if mirror else i, rng.nonzero_mod(p)))
        layers = [[s]]
        for k in range(slots):
            layers.append([v for lays, _, _ in parts for v in lays[k]])
        layers.append([t])
        P = Abp(n, layers, edges, p).prune()
        if P.edges:
            return P.relabel()
    raise RuntimeError("failed to generate a nonempty strict-interval ABP")
