"""Partial derivative matrices and their rank over GF(p)."""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .partitions import Partition
from .poly import MultilinearPoly

MAX_SIDE = 14


class RankCapExceeded(ValueError):
    pass


def _compress_table(n: int, side_mask: int) -> tuple[list[int], int]:
    """Positions of the side's variables (ascending) and their count."""
    pos = [i for i in range(n) if side_mask >> i & 1]
    return pos, len(pos)


def _compress(mask: int, pos: list[int]) -> int:
    out = 0
    for k, i in enumerate(pos):
        if mask >> i & 1:
            out |= 1 << k
    return out


def pd_matrix(f: MultilinearPoly, phi: Partition) -> np.ndarray:
    """Rows: Y-monomials, columns: Z-monomials, both in ascending bitmask order."""
    if phi.n != f.n:
        raise ValueError(f"partition covers {phi.n} variables, polynomial has {f.n}")
    ypos, ny = _compress_table(f.n, phi.ymask)
    zpos, nz = _compress_table(f.n, phi.zmask)
    if ny > MAX_SIDE or nz > MAX_SIDE:
        raise RankCapExceeded(f"side sizes {ny}/{nz} exceed {MAX_SIDE}")
    dtype = np.int64 if f.p < kernels._C_LIMIT else object
    M = np.zeros((1 << ny, 1 << nz), dtype=dtype)
    ym, zm = phi.ymask, phi.zmask
    for mask, c in f.items():
        M[_compress(mask & ym, ypos), _compress(mask & zm, zpos)] = c
    return M


def rank_of(f: MultilinearPoly, phi: Partition) -> int:
    if f.is_zero():
        return 0
    M = pd_matrix(f, phi)
    # drop all-zero rows and columns before elimination
    rows = np.flatnonzero(M.any(axis=1))
    cols = np.flatnonzero(M.any(axis=0))
    return kernels.rank_mod(M[np.ix_(rows, cols)], f.p)


def log_deficit(n: int, r: int) -> float | None:
    """``n/2 - log2(r)`` when it is an integer, else ``None``."""
    if r <= 0:
        return None
    lg = math.log2(r)
    if lg != int(lg):
        return None
    d = n / 2 - lg
    return int(d) if d == int(d) else d
