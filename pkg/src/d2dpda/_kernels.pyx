# cython: language_level=3
"""Compiled inner loops for array validation, phi search and packet XOR.

Grids are int32 arrays with 0 for a star and 1..S for symbols.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef inline void _occurrence_index(const int[:, :] grid, int n_symbols,
                                   long[:] start, long[:] flat):
    cdef Py_ssize_t F = grid.shape[0], K = grid.shape[1]
    cdef Py_ssize_t j, k, pos
    cdef int s
    cdef long[:] fill = np.zeros(n_symbols + 2, dtype=np.int64)
    for j in range(F):
        for k in range(K):
            s = grid[j, k]
            if s > 0:
                start[s + 1] += 1
    for s in range(1, n_symbols + 2):
        start[s] += start[s - 1]
    for j in range(F):
        for k in range(K):
            s = grid[j, k]
            if s > 0:
                pos = start[s] + fill[s]
                flat[pos] = j * K + k
                fill[s] += 1


def pair_violations(const int[:, :] grid, int n_symbols):
    """Return (kind, s, j1, k1, j2, k2) for every equal-symbol pair breaking C3.

    kind is 0 for a shared row or column, 1 for a missing star in the
    opposite corners.
    """
    cdef Py_ssize_t K = grid.shape[1]
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t a, b
    cdef long p, q
    cdef int s, j1, k1, j2, k2
    for j1 in range(grid.shape[0]):
        for k1 in range(K):
            if grid[j1, k1] > 0:
                total += 1
    cdef long[:] start = np.zeros(n_symbols + 2, dtype=np.int64)
    cdef long[:] flat = np.zeros(max(total, 1), dtype=np.int64)
    _occurrence_index(grid, n_symbols, start, flat)
    out = []
    for s in range(1, n_symbols + 1):
        for a in range(start[s], start[s + 1]):
            p = flat[a]
            j1 = p // K
            k1 = p % K
            for b in range(a + 1, start[s + 1]):
                q = flat[b]
                j2 = q // K
                k2 = q % K
                if j1 == j2 or k1 == k2:
                    out.append((0, s, j1, k1, j2, k2))
                elif grid[j1, k2] != 0 or grid[j2, k1] != 0:
                    out.append((1, s, j1, k1, j2, k2))
    return out


def phi_candidates(const int[:, :] grid, int n_symbols):
    """Smallest column starred in every row holding s, or -1, per symbol.

    Index 0 of the result is unused.
    """
    cdef Py_ssize_t F = grid.shape[0], K = grid.shape[1]
    cdef Py_ssize_t a, c, total = 0
    cdef int s, j, k
    cdef bint ok
    for j in range(F):
        for k in range(K):
            if grid[j, k] > 0:
                total += 1
    cdef long[:] start = np.zeros(n_symbols + 2, dtype=np.int64)
    cdef long[:] flat = np.zeros(max(total, 1), dtype=np.int64)
    _occurrence_index(grid, n_symbols, start, flat)
    result = np.full(n_symbols + 1, -1, dtype=np.int64)
    cdef long[:] res = result
    for s in range(1, n_symbols + 1):
        for c in range(K):
            ok = True
            for a in range(start[s], start[s + 1]):
                j = flat[a] // K
                if grid[j, c] != 0:
                    ok = False
                    break
            if ok:
                res[s] = c
                break
    return result


def xor_into(unsigned char[:] dst, const unsigned char[:] src):
    """dst ^= src in place; both buffers must have equal length."""
    cdef Py_ssize_t i, n = dst.shape[0]
    if src.shape[0] != n:
        raise ValueError(f"length mismatch: {n} != {src.shape[0]}")
    for i in range(n):
        dst[i] ^= src[i]
