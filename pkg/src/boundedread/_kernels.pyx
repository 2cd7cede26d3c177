# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular linear-algebra kernels (primes below 2**31)."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64


cdef i64 _inv(i64 a, i64 p):
    cdef i64 result = 1, base = a % p, e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def rank_mod(a, long long p):
    cdef cnp.ndarray[i64, ndim=2] arr = np.array(a, dtype=np.int64) % p
    if arr.ndim != 2 or arr.size == 0:
        return 0
    cdef i64[:, ::1] A = np.ascontiguousarray(arr)
    cdef Py_ssize_t m = A.shape[0], ncols = A.shape[1]
    cdef Py_ssize_t r = 0, col, i, j, piv
    cdef i64 f, iv, tmp
    for col in range(ncols):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if A[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        iv = _inv(A[r, col], p)
        for j in range(col, ncols):
            A[r, j] = A[r, j] * iv % p
        for i in range(r + 1, m):
            f = A[i, col]
            if f != 0:
                for j in range(col, ncols):
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
                    if A[i, j] < 0:
                        A[i, j] += p
        r += 1
    return r


def independent_rows(a, long long p):
    cdef cnp.ndarray[i64, ndim=2] arr = np.array(a, dtype=np.int64) % p
    if arr.ndim != 2 or arr.size == 0:
        return []
    cdef i64[:, ::1] A = np.ascontiguousarray(arr)
    cdef Py_ssize_t m = A.shape[0], ncols = A.shape[1]
    cdef i64[:, ::1] basis = np.zeros((ncols, ncols), dtype=np.int64)
    cdef Py_ssize_t[::1] pivots = np.zeros(ncols, dtype=np.intp)
    cdef i64[::1] row = np.zeros(ncols, dtype=np.int64)
    cdef Py_ssize_t nb = 0, idx, k, j, lead
    cdef i64 c, iv
    keep = []
    for idx in range(m):
        if nb == ncols:
            break
        for j in range(ncols):
            row[j] = A[idx, j]
        for k in range(nb):
            c = row[pivots[k]]
            if c != 0:
                for j in range(ncols):
                    row[j] = (row[j] - c * basis[k, j]) % p
                    if row[j] < 0:
                        row[j] += p
        lead = -1
        for j in range(ncols):
            if row[j] != 0:
                lead = j
                break
        if lead < 0:
            continue
        iv = _inv(row[lead], p)
        for j in range(ncols):
            basis[nb, j] = row[j] * iv % p
        pivots[nb] = lead
        nb += 1
        keep.append(idx)
    return keep


def matmul_mod(a, b, long long p):
    cdef i64[:, ::1] A = np.ascontiguousarray(np.array(a, dtype=np.int64) % p)
    cdef i64[:, ::1] B = np.ascontiguousarray(np.array(b, dtype=np.int64) % p)
    cdef Py_ssize_t m = A.shape[0], k = A.shape[1], n = B.shape[1], i, j, t
    if B.shape[0] != k:
        raise ValueError("shape mismatch")
    out = np.zeros((m, n), dtype=np.int64)
    cdef i64[:, ::1] C = out
    cdef i64 acc, aval
    for i in range(m):
        for t in range(k):
            aval = A[i, t]
            if aval == 0:
                continue
            for j in range(n):
                C[i, j] = (C[i, j] + aval * B[t, j]) % p
    return out
