"""Strict-interval conversion and interval-formula depth reduction.
Variable x_k of the examples is index k-1."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundedread.abp import Abp, Edge, path_abp
from boundedread.formula import (
    Const,
    Formula,
    Prod,
    add,
    fold_constants,
    mul,
    node_size,
    replace_at,
    subtree_at,
    x,
)
from boundedread.hardpoly import random_interval_formula, random_roabp, random_strict_interval_abp
from boundedread.pit import roabp_pit
from boundedread.poly import MultilinearPoly
from boundedread.transforms import (
    ASC,
    DESC,
    TransformError,
    classify_nodes,
    depth_bound,
    depth_reduce_interval,
    find_tree_separator,
    one_order_to_roabp,
    path_factors,
    reverse_abp,
    split_asc_desc,
    strict_interval_to_roabp,
    sum_roabps,
)
from boundedread.validate import check_interval_formula, check_oblivious_roabp, check_strict_interval

from strategies import seeds

p = 2**31 - 1


def poly(n, coeffs):
    return MultilinearPoly(n, coeffs, p)


def two_branch(c1=1, c2=1):
    return Abp(2, [[0], [1, 2], [3]],
               [Edge(0, 1, 0, c1), Edge(1, 3, 1, 1), Edge(0, 2, 1, c2), Edge(2, 3, 0, 1)], p)


X1X2 = poly(2, {0b11: 1})


# classification and splitting

def test_classify_examples():
    cls = classify_nodes(two_branch())
    assert cls.tags == {1: ASC, 2: DESC}
    P = path_abp(2, [None, 0, 1], p=p)
    cls = classify_nodes(P)
    assert cls.tags[1] == ASC and 1 in cls.front_free


def test_classify_rejects_invalid():
    with pytest.raises(TransformError):
        classify_nodes(path_abp(3, [0, 2, 1], p=p))


def test_split_examples():
    P1, P2 = split_asc_desc(two_branch())
    assert P1.expand() == X1X2 and P2.expand() == X1X2
    Q1, Q2 = split_asc_desc(path_abp(3, [0, 1, 2], p=p))
    assert Q2.expand().is_zero()


def test_split_constant_lead_in():
    # s -c-> a -x3-> b -x2-> t: a has nothing before it
    P = Abp(3, [[0], [1], [2], [3]], [Edge(0, 1, None, 5), Edge(1, 2, 2, 1), Edge(2, 3, 1, 1)], p)
    P1, P2 = split_asc_desc(P)
    assert P1.expand() + P2.expand() == P.expand()


@given(seeds, st.integers(1, 9), st.integers(3, 40))
def test_split_sums_and_separates(seed, n, size):
    P = random_strict_interval_abp(n, size, seed, p).prune()
    cls = classify_nodes(P)
    P1, P2 = split_asc_desc(P, cls)
    assert P1.expand() + P2.expand() == P.expand()
    asc, desc = cls.strict(ASC), cls.strict(DESC)
    for e in P.edges:
        assert not ({e.src, e.dst} & asc and {e.src, e.dst} & desc)


# staggering and reversal

def test_stagger_pads_skipped_variable():
    P = path_abp(3, [0, 2], p=p)
    R = one_order_to_roabp(P, ASC)
    rep = check_oblivious_roabp(R)
    assert rep.verdict and rep.data["layer_vars"] == [0, None, 2]
    assert any(e.var is None and e.coeff == 1 for e in R.edges)
    assert R.expand() == P.expand()


def test_stagger_idempotent_on_roabp():
    P = path_abp(3, [0, 1, 2], [2, 3, 5], p=p)
    R = one_order_to_roabp(P, ASC)
    assert R.expand() == P.expand()
    assert check_oblivious_roabp(R).data["layer_vars"] == [0, 1, 2]


def test_stagger_descending():
    P = path_abp(2, [1, 0], p=p)
    R = one_order_to_roabp(P, DESC)
    assert R.expand() == X1X2
    assert check_oblivious_roabp(R).data["order"] == [0, 1]


def test_stagger_rejects_mixed():
    with pytest.raises(TransformError):
        one_order_to_roabp(two_branch(), ASC)


def test_reverse_examples():
    P = path_abp(2, [0, 1], p=p)
    R = reverse_abp(P)
    assert check_oblivious_roabp(R).data["order"] == [1, 0]
    assert R.expand() == P.expand() == X1X2
    assert reverse_abp(R).to_json() == P.to_json()
    Q = random_roabp(5, 3, 4, p)
    assert [len(la) for la in reverse_abp(Q).layers] == [len(la) for la in reversed(Q.layers)]


# conversion

def test_convert_two_branch():
    R = strict_interval_to_roabp(two_branch())
    assert check_oblivious_roabp(R).verdict
    assert R.expand() == X1X2.scale(2)


def test_convert_identity_roabp():
    P = random_roabp(6, 3, 2, p, order=list(range(6)))
    R = strict_interval_to_roabp(P)
    assert R.expand() == P.expand()


def test_convert_rejects_invalid():
    with pytest.raises(TransformError):
        strict_interval_to_roabp(path_abp(3, [0, 2, 1], p=p))


def test_convert_zero_program():
    P = Abp(2, [[0], [1], [2]], [Edge(0, 1, 0, 1)], p)
    R = strict_interval_to_roabp(P)
    assert R.expand().is_zero()


@given(seeds, st.integers(1, 10), st.integers(3, 60))
def test_convert_corpus(seed, n, size):
    P = random_strict_interval_abp(n, size, seed, p)
    R = strict_interval_to_roabp(P)
    rep = check_oblivious_roabp(R)
    assert rep.verdict
    assert all(a < b for a, b in zip(rep.data["order"], rep.data["order"][1:]))
    assert R.expand() == P.expand()
    assert R.size <= 2 * n * P.size


# sums of ROABPs

def test_sum_examples():
    A, B = path_abp(2, [0, None], p=p), path_abp(2, [None, 1], p=p)
    assert sum_roabps(A, B).expand() == poly(2, {1: 1, 2: 1})
    P = random_roabp(6, 3, 8, p)
    Z = sum_roabps(P, P.scale(-1))
    assert Z.expand().is_zero() and roabp_pit(Z).zero


@given(seeds, seeds, st.integers(1, 8), st.integers(1, 4), st.integers(1, 4))
def test_sum_width_and_value(s1, s2, n, w1, w2):
    order = list(range(n))
    A = random_roabp(n, w1, s1, p, order=order)
    B = random_roabp(n, w2, s2, p, order=order)
    S = sum_roabps(A, B)
    assert check_oblivious_roabp(S).verdict
    assert S.expand() == A.expand() + B.expand()
    assert S.width <= A.width + B.width + 2


def test_sum_order_mismatch():
    A = path_abp(2, [0, 1], p=p)
    B = path_abp(2, [1, 0], p=p)
    with pytest.raises(TransformError):
        sum_roabps(A, B)


# separator and depth reduction

COMB = Formula(mul(x(0), mul(x(1), mul(x(2), mul(x(3), x(4))))), 5, p)


def test_separator_comb():
    path = find_tree_separator(COMB)
    g = subtree_at(COMB.root, path)
    assert g == mul(x(2), mul(x(3), x(4)))
    assert node_size(g) == 5 and 3 < 5 <= 6


def test_separator_small_tree():
    F = Formula(add(x(0), x(1)), 2, p)
    path = find_tree_separator(F)
    assert node_size(subtree_at(F.root, path)) == 1
    with pytest.raises(TransformError):
        find_tree_separator(Formula(x(0), 1, p))


@given(seeds, st.integers(1, 12), st.integers(3, 100))
def test_separator_bounds(seed, n, size):
    F = random_interval_formula(n, size, seed, p).binarize()
    s = F.size
    if s < 3:
        return
    g = node_size(subtree_at(F.root, find_tree_separator(F)))
    assert 3 * g <= 2 * s
    assert 6 * g > 2 * s - 3


def test_depth_reduce_comb():
    G = depth_reduce_interval(COMB)
    assert G.expand() == poly(5, {0b11111: 1})
    assert G.depth <= 6
    assert check_interval_formula(G).verdict


def test_depth_reduce_balanced_input():
    F = Formula(mul(add(x(0), x(1)), add(x(2), x(3))), 4, p)
    G = depth_reduce_interval(F)
    assert G.expand() == F.expand() and G.depth <= depth_bound(F.size)


def test_depth_reduce_nested():
    F = Formula(mul(x(0), add(x(1), mul(x(2), add(x(3), x(4))))), 5, p)
    G = depth_reduce_interval(F)
    assert G.expand() == poly(5, {0b00011: 1, 0b01101: 1, 0b10101: 1})
    assert check_interval_formula(G).verdict


def test_depth_reduce_rejects_non_interval():
    with pytest.raises(TransformError):
        depth_reduce_interval(Formula(mul(x(1), add(x(0), x(2))), 3, p))


def test_regression_h_times_p_plus_g():
    # F = h * (q + g) with h = x1, q = x2, g = x3*x4*x5
    h, q = x(0), x(1)
    F = Formula(mul(h, add(q, mul(x(2), mul(x(3), x(4))))), 5, p)
    path = find_tree_separator(F)
    assert subtree_at(F.root, path) == mul(x(2), mul(x(3), x(4)))
    left, right = path_factors(F.root, path)
    assert left == [h] and right == []
    rest = Formula(fold_constants(replace_at(F.root, path, Const(0)), p), 5, p)
    # the remainder must be h*q; the sum of the two side parts would only give q
    assert rest.expand() == Formula(mul(h, q), 5, p).expand()
    assert rest.expand() != Formula(q, 5, p).expand()
    G = depth_reduce_interval(F)
    assert G.expand() == F.expand()
    assert check_interval_formula(G).verdict


@given(seeds, st.integers(1, 12), st.integers(3, 100))
def test_path_factor_spans(seed, n, size):
    F = random_interval_formula(n, size, seed, p).binarize()
    if F.size < 3:
        return
    path = find_tree_separator(F)
    g = subtree_at(F.root, path)
    spans = check_interval_formula(F.with_root(g)).data["spans"]
    if spans[()] is None:
        return
    i, j = spans[()]
    left, right = path_factors(F.root, path)
    for pieces, ok in ((left, lambda sp: sp[1] < i), (right, lambda sp: sp[0] > j)):
        if not pieces:
            continue
        sp = check_interval_formula(F.with_root(Prod(tuple(pieces)))).data["spans"][()]
        assert sp is None or ok(sp)


@given(seeds, st.integers(1, 12), st.integers(1, 100))
def test_depth_reduce_corpus(seed, n, size):
    F = random_interval_formula(n, size, seed, p)
    G = depth_reduce_interval(F)
    assert G.expand() == F.expand()
    assert check_interval_formula(G).verdict
    assert G.depth <= 2 * math.log(max(F.size, 1), 1.5) + 4
