"""Arithmetic formulas: immutable gate trees with sum, product and leaf nodes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .field import DEFAULT_PRIME
from .poly import MultilinearPoly, OverlappingSupports


class NonMultilinear(ValueError):
    """A product (or path) multiplies two factors sharing a variable."""


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Sum:
    children: tuple


@dataclass(frozen=True)
class Prod:
    children: tuple


Node = Union[Var, Const, Sum, Prod]
Path = tuple  # child-index path from the root


def is_leaf(node: Node) -> bool:
    return isinstance(node, (Var, Const))


def children(node: Node) -> tuple:
    return node.children if isinstance(node, (Sum, Prod)) else ()


def node_size(node: Node) -> int:
    if is_leaf(node):
        return 1
    return 1 + sum(node_size(c) for c in node.children)


def node_depth(node: Node) -> int:
    if is_leaf(node):
        return 0
    return 1 + max(node_depth(c) for c in node.children)


def node_vars(node: Node) -> int:
    """Bitmask of variables labelling leaves below ``node``."""
    if isinstance(node, Var):
        return 1 << node.index
    if isinstance(node, Const):
        return 0
    m = 0
    for c in node.children:
        m |= node_vars(c)
    return m


def node_span(node: Node) -> tuple[int, int] | None:
    """Smallest index interval covering the leaf variables, ``None`` if there are none."""
    if isinstance(node, Var):
        return (node.index, node.index)
    if isinstance(node, Const):
        return None
    lo = hi = None
    for c in node.children:
        s = node_span(c)
        if s is None:
            continue
        lo = s[0] if lo is None else min(lo, s[0])
        hi = s[1] if hi is None else max(hi, s[1])
    return None if lo is None else (lo, hi)


def _expand(node: Node, n: int, p: int) -> tuple[MultilinearPoly, int]:
    if isinstance(node, Var):
        return MultilinearPoly.var(n, node.index, 1, p), 1 << node.index
    if isinstance(node, Const):
        return MultilinearPoly.const(n, node.value, p), 0
    if isinstance(node, Sum):
        acc, used = MultilinearPoly.zero(n, p), 0
        for c in node.children:
            term, m = _expand(c, n, p)
            acc, used = acc + term, used | m
        return acc, used
    acc, used = MultilinearPoly.const(n, 1, p), 0
    for c in node.children:
        term, m = _expand(c, n, p)
        # syntactic test, so that cancellation cannot hide a shared variable
        if used & m:
            raise NonMultilinear(f"product gate children share variables (mask {used & m})")
        try:
            acc = acc * term
        except OverlappingSupports as exc:
            raise NonMultilinear(str(exc)) from exc
        used |= m
    return acc, used


def expand_node(node: Node, n: int, p: int) -> MultilinearPoly:
    return _expand(node, n, p)[0]


def eval_node(node: Node, point, p: int) -> int:
    if isinstance(node, Var):
        return point[node.index] % p
    if isinstance(node, Const):
        return node.value % p
    if isinstance(node, Sum):
        return sum(eval_node(c, point, p) for c in node.children) % p
    acc = 1
    for c in node.children:
        acc = acc * eval_node(c, point, p) % p
    return acc


def subtree_at(node: Node, path: Path) -> Node:
    for i in path:
        node = node.children[i]
    return node


def replace_at(node: Node, path: Path, new: Node) -> Node:
    if not path:
        return new
    i = path[0]
    kids = list(node.children)
    kids[i] = replace_at(kids[i], path[1:], new)
    return type(node)(tuple(kids))


def iter_nodes(node: Node, path: Path = ()) -> Iterator[tuple[Path, Node]]:
    """Pre-order traversal yielding ``(path, node)``."""
    stack = [(path, node)]
    while stack:
        pth, nd = stack.pop()
        yield pth, nd
        kids = children(nd)
        for i in range(len(kids) - 1, -1, -1):
            stack.append((pth + (i,), kids[i]))


def _span_key(node: Node) -> int:
    s = node_span(node)
    return -1 if s is None else s[0]


def binarize_node(node: Node) -> Node:
    """Left-combed binary form; product children are ordered by span first so
    that every intermediate product still has disjoint-interval children."""
    if is_leaf(node):
        return node
    kids = [binarize_node(c) for c in node.children]
    if isinstance(node, Prod):
        kids.sort(key=_span_key)
    if len(kids) == 1:
        return kids[0]
    cls = type(node)
    acc = kids[0]
    for c in kids[1:]:
        acc = cls((acc, c))
    return acc


def fold_constants(node: Node, p: int) -> Node:
    """Simplify zero/one constants and unary gates; the polynomial is unchanged."""
    if is_leaf(node):
        if isinstance(node, Const):
            return Const(node.value % p)
        return node
    kids = [fold_constants(c, p) for c in node.children]
    if isinstance(node, Sum):
        const = sum(c.value for c in kids if isinstance(c, Const)) % p
        rest = [c for c in kids if not isinstance(c, Const)]
        if const:
            rest.append(Const(const))
        if not rest:
            return Const(0)
        return rest[0] if len(rest) == 1 else Sum(tuple(rest))
    const = 1
    rest = []
    for c in kids:
        if isinstance(c, Const):
            const = const * c.value % p
        else:
            rest.append(c)
    if const == 0:
        return Const(0)
    if const != 1:
        rest.insert(0, Const(const))
    if not rest:
        return Const(1)
    return rest[0] if len(rest) == 1 else Prod(tuple(rest))


@dataclass(frozen=True)
class Formula:
    root: Node
    n: int
    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        for _, nd in iter_nodes(self.root):
            if isinstance(nd, Var) and not 0 <= nd.index < self.n:
                raise ValueError(f"variable {nd.index} outside [0, {self.n})")
            if isinstance(nd, (Sum, Prod)) and not nd.children:
                raise ValueError("internal gate without children")

    @property
    def size(self) -> int:
        return node_size(self.root)

    @property
    def depth(self) -> int:
        return node_depth(self.root)

    def expand(self) -> MultilinearPoly:
        return expand_node(self.root, self.n, self.p)

    def eval(self, point) -> int:
        if len(point) != self.n:
            raise ValueError(f"point has length {len(point)}, expected {self.n}")
        return eval_node(self.root, point, self.p)

    def binarize(self) -> Formula:
        return Formula(binarize_node(self.root), self.n, self.p)

    def with_root(self, root: Node) -> Formula:
        return Formula(root, self.n, self.p)


def formula_expand(F: Formula) -> MultilinearPoly:
    return F.expand()


# convenience builders used in tests and generators
def x(i: int) -> Var:
    return Var(i)


def c(v: int) -> Const:
    return Const(v)


def add(*kids: Node) -> Sum:
    return Sum(tuple(kids))


def mul(*kids: Node) -> Prod:
    return Prod(tuple(kids))
