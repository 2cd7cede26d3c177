import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundedread.field import (
    DEFAULT_PRIME,
    DivisionByZero,
    FieldElem,
    FieldError,
    ModulusMismatch,
    check_modulus,
    ff_arith,
)
from boundedread.poly import (
    MAX_VARS,
    MultilinearPoly,
    OverlappingSupports,
    PolyError,
    mlp_add,
    mlp_eval,
    mlp_mul,
)

from strategies import SMALL_P, points, polys


def F7(v):
    return FieldElem(v, 7)


# field

def test_ff_arith_examples():
    assert ff_arith(F7(3), F7(5), "add") == F7(1)
    assert ff_arith(F7(3), F7(5), "mul") == F7(1)
    assert ff_arith(F7(1), F7(3), "div") == F7(5)
    assert ff_arith(F7(3), F7(5), "sub") == F7(5)


def test_ff_arith_errors():
    with pytest.raises(ModulusMismatch):
        ff_arith(F7(1), FieldElem(1, 11), "add")
    with pytest.raises(DivisionByZero):
        ff_arith(F7(1), F7(0), "div")
    with pytest.raises(ValueError):
        ff_arith(F7(1), F7(1), "pow")


def test_check_modulus():
    assert check_modulus(DEFAULT_PRIME) == DEFAULT_PRIME
    assert check_modulus(101) == 101
    for bad in (1, 91, 2**20 + 1, 2**31 + 1):
        with pytest.raises(FieldError):
            check_modulus(bad)
    assert check_modulus(2**61 - 1)


field_vals = st.integers(0, SMALL_P - 1)


@given(field_vals, field_vals, field_vals)
def test_field_laws(a, b, c):
    A, B, C = (FieldElem(v, SMALL_P) for v in (a, b, c))
    assert A + B == B + A and A * B == B * A
    assert (A + B) + C == A + (B + C)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    if b:
        assert (A * B) / B == A


# polynomials

def P(coeffs, n=4, p=DEFAULT_PRIME):
    return MultilinearPoly(n, coeffs, p)


def test_add_examples():
    assert mlp_add(P({0: 1, 1: 1}), P({1: 1})) == P({0: 1, 1: 2})
    f = P({0: 3, 5: 2})
    assert mlp_add(f, MultilinearPoly.zero(4)) == f
    g = mlp_add(P({0: 1, 1: 1}), P({1: DEFAULT_PRIME - 1}))
    assert g == P({0: 1}) and g.coeffs == {0: 1}


def test_mul_examples():
    assert mlp_mul(P({0: 1, 1: 1}), P({2: 1})) == P({2: 1, 3: 1})
    lhs = mlp_mul(P({0: 1, 0b11: 1}), P({0: 1, 0b1100: 1}))
    assert lhs == P({0: 1, 0b11: 1, 0b1100: 1, 0b1111: 1})
    with pytest.raises(OverlappingSupports):
        mlp_mul(P({1: 1}), P({1: 1}))


def test_eval_examples():
    assert mlp_eval(P({0: 1, 0b11: 1}), [1, 1, 0, 0]) == 2
    assert mlp_eval(P({1: 1}), [0, 5, 5, 5]) == 0
    f = MultilinearPoly(3, {0b101: 1, 0b010: 1}, 7)
    assert mlp_eval(f, [2, 3, 5]) == 6
    with pytest.raises(ValueError):
        mlp_eval(f, [1, 2])


def test_no_explicit_zeros_and_caps():
    f = MultilinearPoly(3, {0: 0, 1: 7, 2: 3}, 7)
    assert f.coeffs == {2: 3}
    with pytest.raises(PolyError):
        MultilinearPoly(MAX_VARS + 1, {})
    with pytest.raises(PolyError):
        MultilinearPoly(2, {0b100: 1})
    with pytest.raises(ModulusMismatch):
        P({1: 1}) + MultilinearPoly(4, {1: 1}, 7)
    with pytest.raises(PolyError):
        P({1: 1}) + MultilinearPoly(5, {1: 1})


def test_json_roundtrip_and_canonical():
    f = P({9: 4, 0: 1, 3: 2})
    data = f.to_json()
    assert [t["mask"] for t in data["terms"]] == [0, 3, 9]
    assert MultilinearPoly.from_json(data) == f
    bad = {"n": 4, "p": 7, "terms": [{"mask": 3, "coeff": 1}, {"mask": 1, "coeff": 1}]}
    with pytest.raises(PolyError):
        MultilinearPoly.from_json(bad)


@given(st.data())
def test_add_mul_homomorphic(data):
    n = data.draw(st.integers(2, 8))
    split = data.draw(st.integers(1, n - 1))
    lo = (1 << split) - 1
    f = data.draw(polys(n=n, support=lo))
    g = data.draw(polys(n=n, support=((1 << n) - 1) ^ lo))
    h = data.draw(polys(n=n))
    pt = data.draw(points(n))
    assert (f + h)(pt) == (f(pt) + h(pt)) % SMALL_P
    assert (f * g)(pt) == f(pt) * g(pt) % SMALL_P
    assert len((f * g).coeffs) <= len(f.coeffs) * len(g.coeffs)


@given(polys())
def test_neg_and_sub(f):
    assert (f - f).is_zero()
    assert f + (-f) == MultilinearPoly.zero(f.n, f.p)


@given(polys())
def test_json_roundtrip_property(f):
    assert MultilinearPoly.from_json(f.to_json()) == f
