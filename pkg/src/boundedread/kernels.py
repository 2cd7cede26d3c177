"""Kernel dispatch: compiled extension when importable, numpy fallback otherwise.

Set ``BOUNDEDREAD_PURE=1`` to force the fallback. The compiled kernels only
handle moduli below 2**31; larger primes always take the fallback path.
"""

from __future__ import annotations

import os

from . import _kernels_py as _py

BACKEND = "python"
_c = None
if os.environ.get("BOUNDEDREAD_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _c  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _c = None

_C_LIMIT = 2**31


def rank_mod(a, p: int) -> int:
    if _c is not None and p < _C_LIMIT:
        return _c.rank_mod(a, p)
    return _py.rank_mod(a, p)


def independent_rows(a, p: int) -> list[int]:
    if _c is not None and p < _C_LIMIT:
        return _c.independent_rows(a, p)
    return _py.independent_rows(a, p)


def matmul_mod(a, b, p: int):
    # numpy's vectorised split product beats the compiled triple loop
    # (see benchmarks/bench_kernels.py), so both backends use it
    return _py.matmul_mod(a, b, p)
