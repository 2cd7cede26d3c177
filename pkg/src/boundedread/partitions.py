"""Variable partitions, pairings and the sampling distributions over them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .rng import SplitMix64


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """Assignment of ``x_0 .. x_{n-1}`` to side Y (listed) or Z (the rest)."""

    n: int
    Y: frozenset

    def __post_init__(self) -> None:
        object.__setattr__(self, "Y", frozenset(self.Y))
        if any(not 0 <= i < self.n for i in self.Y):
            raise PartitionError("Y contains an index outside [0, n)")

    @classmethod
    def from_mask(cls, n: int, ymask: int) -> Partition:
        return cls(n, frozenset(i for i in range(n) if ymask >> i & 1))

    @property
    def Z(self) -> frozenset:
        return frozenset(range(self.n)) - self.Y

    @property
    def ymask(self) -> int:
        m = 0
        for i in self.Y:
            m |= 1 << i
        return m

    @property
    def zmask(self) -> int:
        return ((1 << self.n) - 1) & ~self.ymask

    def side(self, i: int) -> str:
        return "Y" if i in self.Y else "Z"

    def is_equipartition(self) -> bool:
        return 2 * len(self.Y) == self.n

    def swap(self) -> Partition:
        return Partition(self.n, self.Z)

    def restrict(self, indices: Iterable[int]) -> frozenset:
        return frozenset(i for i in indices if i in self.Y)

    def to_json(self) -> dict:
        return {"n": self.n, "Y": sorted(self.Y)}

    @classmethod
    def from_json(cls, data, n: int | None = None) -> Partition:
        if n is None:
            n = data.get("n")
        if n is None:
            raise PartitionError("partition JSON lacks 'n' and none was supplied")
        return cls(int(n), frozenset(int(i) for i in data["Y"]))


def _norm_pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Pairing:
    """Perfect matching on ``[0, n)``; pairs stored sorted and canonical."""

    n: int
    pairs: tuple

    def __post_init__(self) -> None:
        canon = tuple(sorted(_norm_pair(int(a), int(b)) for a, b in self.pairs))
        object.__setattr__(self, "pairs", canon)
        seen = [i for pr in canon for i in pr]
        if sorted(seen) != list(range(self.n)):
            raise PartitionError(f"pairs {canon} are not a perfect matching on [0, {self.n})")

    def pair_set(self) -> frozenset:
        return frozenset(self.pairs)

    def partner(self, i: int) -> int:
        for a, b in self.pairs:
            if a == i:
                return b
            if b == i:
                return a
        raise KeyError(i)

    def to_json(self) -> dict:
        return {"n": self.n, "pairs": [list(pr) for pr in self.pairs]}

    @classmethod
    def from_json(cls, data) -> Pairing:
        pairs = [tuple(pr) for pr in data["pairs"]]
        n = int(data.get("n", 2 * len(pairs)))
        return cls(n, tuple(pairs))


@dataclass(frozen=True)
class Coloring:
    """``K`` colour classes of equal size ``n/K`` taken contiguously along ``order``."""

    n: int
    K: int
    classes: tuple

    @classmethod
    def contiguous(cls, n: int, K: int, order: Sequence[int] | None = None) -> Coloring:
        if K <= 0 or n % K:
            raise PartitionError(f"K={K} must divide n={n}")
        order = list(range(n)) if order is None else list(order)
        if sorted(order) != list(range(n)):
            raise PartitionError("order must be a permutation of [0, n)")
        size = n // K
        return cls(n, K, tuple(frozenset(order[c * size:(c + 1) * size]) for c in range(K)))

    def color_of(self, i: int) -> int:
        for c, cls_ in enumerate(self.classes):
            if i in cls_:
                return c
        raise KeyError(i)


# samplers

def _require_even(n: int) -> None:
    if n <= 0 or n % 2:
        raise PartitionError(f"n={n} must be positive and even")


def sample_equipartition(n: int, seed: int) -> Partition:
    _require_even(n)
    rng = SplitMix64(seed)
    idx = list(range(n))
    rng.shuffle(idx)
    return Partition(n, frozenset(idx[: n // 2]))


@dataclass(frozen=True)
class BlockStructure:
    """Consecutive blocks ``B_i = {i*r, ..., (i+1)*r - 1}`` of size ``r``.

    ``even_blocks=False`` drops the requirement that the block count be even;
    blocks of even size still give a global equi-partition.
    """

    n: int
    r: int
    even_blocks: bool = True

    def __post_init__(self) -> None:
        if self.r <= 0 or self.n <= 0 or self.n % self.r:
            raise PartitionError(f"r={self.r} must divide n={self.n}")
        if self.r % 2:
            raise PartitionError(f"block size r={self.r} must be even")
        if self.even_blocks and (self.n // self.r) % 2:
            raise PartitionError(f"n/r={self.n // self.r} must be even")

    @property
    def blocks(self) -> list[list[int]]:
        return [list(range(i * self.r, (i + 1) * self.r)) for i in range(self.n // self.r)]


def sample_db(bs: BlockStructure, seed: int) -> Partition:
    """Independent uniform equi-partition of every block."""
    rng = SplitMix64(seed)
    Y: set[int] = set()
    for block in bs.blocks:
        b = list(block)
        rng.shuffle(b)
        Y.update(b[: bs.r // 2])
    return Partition(bs.n, frozenset(Y))


def arc_step(L: int, R: int, move: int, n: int) -> tuple[tuple[int, int], int, int]:
    """Apply move 0/1/2 (left, straddle, right) to the arc ``[L, R]`` (mod n)."""
    if move == 0:
        pair = ((L - 2) % n, (L - 1) % n)
        return pair, (L - 2) % n, R
    if move == 1:
        pair = ((L - 1) % n, (R + 1) % n)
        return pair, (L - 1) % n, (R + 1) % n
    if move == 2:
        pair = ((R + 1) % n, (R + 2) % n)
        return pair, L, (R + 2) % n
    raise ValueError(f"move must be 0, 1 or 2, got {move}")


def arc_pairing_from_moves(n: int, moves: Sequence[int]) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Pairs in step order and the arc ``(L, R)`` after each step."""
    _require_even(n)
    pairs = [(0, 1)]
    arcs = [(0, 1)]
    L, R = 0, 1
    for mv in moves:
        pair, L, R = arc_step(L, R, mv, n)
        pairs.append(pair)
        arcs.append((L, R))
    return pairs, arcs


def _sample_arc_moves(n: int, rng: SplitMix64) -> list[int]:
    return [rng.below(3) for _ in range(n // 2 - 1)]


def sample_arc_pairing(n: int, seed: int) -> Pairing:
    _require_even(n)
    pairs, _ = arc_pairing_from_moves(n, _sample_arc_moves(n, SplitMix64(seed)))
    return Pairing(n, tuple(pairs))


def sample_arc_partition(n: int, seed: int) -> tuple[Pairing, Partition]:
    """Arc pairing plus an independent uniform orientation of every pair."""
    _require_even(n)
    rng = SplitMix64(seed)
    pairs, _ = arc_pairing_from_moves(n, _sample_arc_moves(n, rng))
    Y = set()
    for a, b in pairs:
        Y.add(a if rng.coin() else b)
    return Pairing(n, tuple(pairs)), Partition(n, frozenset(Y))


def partition_from_pairing(pairing: Pairing, orientation: int) -> Partition:
    """Bichromatic partition: bit k of ``orientation`` puts the larger end of pair k in Y."""
    Y = set()
    for k, (a, b) in enumerate(pairing.pairs):
        Y.add(b if orientation >> k & 1 else a)
    return Partition(pairing.n, frozenset(Y))


# measures on pairings

def f_arc_partition(order: Sequence[int]) -> Pairing:
    """Pair consecutively read variables: (order[0], order[1]), (order[2], order[3]), ..."""
    n = len(order)
    if sorted(order) != list(range(n)):
        raise PartitionError("order must be a permutation of [0, n)")
    _require_even(n)
    return Pairing(n, tuple((order[i], order[i + 1]) for i in range(0, n, 2)))


def similarity(P: Pairing, Q: Pairing) -> int:
    """Number of pairs the two pairings share."""
    if P.n != Q.n:
        raise PartitionError(f"pairings on different ground sets ({P.n} vs {Q.n})")
    return len(P.pair_set() & Q.pair_set())


def violations(pairing: Pairing, col: Coloring, threshold: float) -> tuple[list[int], int]:
    """Per-colour count of pairs with exactly one end in that colour, and the
    number of colours whose count reaches ``threshold``."""
    if pairing.n != col.n:
        raise PartitionError("pairing and colouring disagree on n")
    sizes = []
    for cls_ in col.classes:
        sizes.append(sum(1 for a, b in pairing.pairs if (a in cls_) != (b in cls_)))
    G = sum(1 for v in sizes if v >= threshold)
    return sizes, G


def all_equipartitions(indices: Sequence[int], n: int):
    """Every split of ``indices`` into halves, as partitions of ``[0, n)``."""
    from itertools import combinations

    idx = list(indices)
    if len(idx) % 2:
        raise PartitionError("need an even number of indices")
    for ys in combinations(idx, len(idx) // 2):
        yield Partition(n, frozenset(ys))
