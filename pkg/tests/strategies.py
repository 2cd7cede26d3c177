"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from boundedread.poly import MultilinearPoly

SMALL_P = 10007


@st.composite
def polys(draw, n=None, p=SMALL_P, max_terms=12, support=None):
    """Random multilinear polynomial; ``support`` restricts the variables used."""
    if n is None:
        n = draw(st.integers(1, 8))
    allowed = (1 << n) - 1 if support is None else support
    masks = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=max_terms))
    coeffs = {}
    for m in masks:
        coeffs[m & allowed] = draw(st.integers(0, p - 1))
    return MultilinearPoly(n, coeffs, p)


@st.composite
def points(draw, n, p=SMALL_P):
    return [draw(st.integers(0, p - 1)) for _ in range(n)]


seeds = st.integers(0, 2**64 - 1)
