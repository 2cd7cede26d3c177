"""Pure-Python (numpy) implementations of the modular linear-algebra kernels.

Any prime is accepted: below 2**31 the work is done in int64, above it the
arrays fall back to Python integers (``dtype=object``).
"""

from __future__ import annotations

import numpy as np

INT64_SAFE = 2**31


def _as_array(a, p: int) -> np.ndarray:
    if p < INT64_SAFE:
        return np.array(a, dtype=np.int64) % p
    return np.array(a, dtype=object) % p


def rank_mod(a, p: int) -> int:
    A = _as_array(a, p)
    if A.ndim != 2 or A.size == 0:
        return 0
    m, ncols = A.shape
    r = 0
    for col in range(ncols):
        if r == m:
            break
        nz = np.nonzero(A[r:, col])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, col]), p - 2, p) % p
        below = A[r + 1:]
        if len(below):
            factors = below[:, col].copy()
            rows = np.nonzero(factors)[0]
            if len(rows):
                below[rows] = (below[rows] - np.outer(factors[rows], A[r]) % p) % p
        r += 1
    return r


def independent_rows(a, p: int) -> list[int]:
    """Indices of the rows kept by a greedy scan in row order."""
    A = _as_array(a, p)
    if A.ndim != 2 or A.size == 0:
        return []
    basis: list[tuple[int, np.ndarray]] = []
    keep: list[int] = []
    for idx in range(A.shape[0]):
        row = A[idx].copy()
        for col, b in basis:
            c = row[col]
            if c:
                row = (row - c * b % p) % p
        nz = np.nonzero(row)[0]
        if len(nz) == 0:
            continue
        col = int(nz[0])
        row = row * pow(int(row[col]), p - 2, p) % p
        basis.append((col, row))
        keep.append(idx)
        if len(basis) == A.shape[1]:
            break
    return keep


def matmul_mod(a, b, p: int) -> np.ndarray:
    A = _as_array(a, p)
    B = _as_array(b, p)
    if p >= INT64_SAFE:
        return A.dot(B) % p
    # split the left factor into 16-bit halves so partial products stay below 2**63
    lo = A & 0xFFFF
    hi = A >> 16
    part_hi = hi.dot(B) % p
    part_lo = lo.dot(B) % p
    return (part_hi * 65536 + part_lo) % p
