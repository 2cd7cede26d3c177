import itertools
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundedread.hardpoly import enum_arc_pairings
from boundedread.partitions import (
    BlockStructure,
    Coloring,
    Pairing,
    Partition,
    PartitionError,
    all_equipartitions,
    f_arc_partition,
    partition_from_pairing,
    sample_arc_pairing,
    sample_arc_partition,
    sample_db,
    sample_equipartition,
    similarity,
    violations,
)

from strategies import seeds

even_n = st.sampled_from([2, 4, 6, 8, 10, 12, 16])


def test_equipartition_small():
    seen = {sample_equipartition(2, s).Y for s in range(50)}
    assert seen == {frozenset({0}), frozenset({1})}
    with pytest.raises(PartitionError):
        sample_equipartition(3, 0)


def test_equipartition_frequency():
    counts = Counter(sample_equipartition(4, s).Y for s in range(10_000))
    assert len(counts) == 6
    assert all(abs(c / 10_000 - 1 / 6) < 0.02 for c in counts.values())


@given(seeds, even_n)
def test_equipartition_sizes(seed, n):
    assert sample_equipartition(n, seed).is_equipartition()


def test_db_small():
    seen = {sample_db(BlockStructure(4, 2), s).Y for s in range(200)}
    assert len(seen) == 4
    assert all(len(Y & {0, 1}) == 1 and len(Y & {2, 3}) == 1 for Y in seen)


@given(seeds, st.sampled_from([(4, 2), (8, 2), (8, 4), (16, 4), (16, 8), (12, 2)]))
def test_db_blockwise_equi(seed, nr):
    n, r = nr
    bs = BlockStructure(n, r)
    phi = sample_db(bs, seed)
    assert phi.is_equipartition()
    assert all(len(phi.Y & set(b)) == r // 2 for b in bs.blocks)


def test_arc_pairing_examples():
    assert all(sample_arc_pairing(4, s) == Pairing(4, ((0, 1), (2, 3))) for s in range(20))
    six = set(enum_arc_pairings(6))
    assert {sample_arc_pairing(6, s) for s in range(100)} == six
    with pytest.raises(PartitionError):
        sample_arc_pairing(5, 0)


@pytest.mark.parametrize("n", [4, 8, 12, 16])
def test_arc_samples_in_support(n):
    support = set(enum_arc_pairings(n)) if n <= 12 else None
    for s in range(1000 if n <= 12 else 100):
        P = sample_arc_pairing(n, s)
        assert (0, 1) in P.pairs
        if support is not None:
            assert P in support


@given(seeds, even_n)
def test_arc_partition_bichromatic(seed, n):
    pairing, phi = sample_arc_partition(n, seed)
    assert phi.is_equipartition()
    assert all((a in phi.Y) != (b in phi.Y) for a, b in pairing.pairs)


def test_partition_from_pairing_covers_all_orientations():
    P = Pairing(4, ((0, 1), (2, 3)))
    got = {partition_from_pairing(P, o).Y for o in range(4)}
    assert got == {frozenset(s) for s in ({0, 2}, {1, 2}, {0, 3}, {1, 3})}


def test_f_arc_partition_examples():
    assert f_arc_partition([0, 1, 2, 3]) == Pairing(4, ((0, 1), (2, 3)))
    assert f_arc_partition([1, 0, 2, 3]) == Pairing(4, ((0, 1), (2, 3)))
    with pytest.raises(PartitionError):
        f_arc_partition([0, 0, 1, 2])


@given(st.permutations(list(range(8))))
def test_f_arc_partition_perfect(order):
    Q = f_arc_partition(order)
    assert sorted(i for pr in Q.pairs for i in pr) == list(range(8))


def test_similarity_examples():
    A = Pairing(4, ((0, 1), (2, 3)))
    assert similarity(A, A) == 2
    assert similarity(A, Pairing(4, ((0, 3), (1, 2)))) == 0
    B = Pairing(6, ((0, 1), (2, 3), (4, 5)))
    C = Pairing(6, ((0, 1), (2, 5), (3, 4)))
    assert similarity(B, C) == 1
    with pytest.raises(PartitionError):
        similarity(A, B)


@given(seeds, seeds, even_n)
def test_similarity_symmetric_bounded(s1, s2, n):
    P, Q = sample_arc_pairing(n, s1), sample_arc_pairing(n, s2)
    assert similarity(P, Q) == similarity(Q, P) <= n // 2


def test_violation_examples():
    col = Coloring.contiguous(4, 2)
    sizes, G = violations(Pairing(4, ((0, 2), (1, 3))), col, 1)
    assert sizes == [2, 2] and G == 2
    sizes, G = violations(Pairing(4, ((0, 1), (2, 3))), col, 1)
    assert sizes == [0, 0] and G == 0
    assert violations(Pairing(4, ((0, 2), (1, 3))), col, 4)[1] == 0


@given(seeds, st.sampled_from([(8, 2), (8, 4), (12, 3), (16, 4)]))
def test_violation_sum_identity(seed, nk):
    n, K = nk
    col = Coloring.contiguous(n, K)
    P = sample_arc_pairing(n, seed)
    sizes, _ = violations(P, col, 1)
    crossing = sum(1 for a, b in P.pairs if col.color_of(a) != col.color_of(b))
    assert sum(sizes) == 2 * crossing


def test_coloring_validation():
    with pytest.raises(PartitionError):
        Coloring.contiguous(6, 4)


def test_all_equipartitions_count():
    assert len(list(all_equipartitions(range(6), 6))) == 20


def test_json_roundtrips():
    phi = Partition(6, {1, 4})
    assert phi.to_json() == {"n": 6, "Y": [1, 4]}
    assert Partition.from_json({"Y": [1, 4]}, n=6) == phi
    assert Partition.from_json(phi.to_json()) == phi
    with pytest.raises(PartitionError):
        Partition.from_json({"Y": [1]})
    P = Pairing(4, ((3, 2), (1, 0)))
    assert P.to_json() == {"n": 4, "pairs": [[0, 1], [2, 3]]}
    assert Pairing.from_json({"pairs": [[2, 3], [0, 1]]}) == P
    with pytest.raises(PartitionError):
        Pairing(4, ((0, 1), (1, 2)))


def test_partition_swap():
    phi = Partition(4, {0, 3})
    assert phi.swap().Y == {1, 2}
    assert list(itertools.chain(phi.Y, phi.Z)) and phi.ymask | phi.zmask == 0b1111
