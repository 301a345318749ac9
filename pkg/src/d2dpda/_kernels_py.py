"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _occurrences(grid, n_symbols):
    occ = [[] for _ in range(n_symbols + 1)]
    for j, row in enumerate(grid.tolist()):
        for k, s in enumerate(row):
            if s > 0:
                occ[s].append((j, k))
    return occ


def pair_violations(grid, n_symbols):
    """Return (kind, s, j1, k1, j2, k2) for every equal-symbol pair breaking C3.

    kind is 0 for a shared row or column, 1 for a missing star in the
    opposite corners.
    """
    g = np.asarray(grid)
    occ = _occurrences(g, n_symbols)
    out = []
    for s in range(1, n_symbols + 1):
        cells = occ[s]
        for a, (j1, k1) in enumerate(cells):
            for j2, k2 in cells[a + 1:]:
                if j1 == j2 or k1 == k2:
                    out.append((0, s, j1, k1, j2, k2))
                elif g[j1, k2] != 0 or g[j2, k1] != 0:
                    out.append((1, s, j1, k1, j2, k2))
    return out


def phi_candidates(grid, n_symbols):
    """Smallest column starred in every row holding s, or -1, per symbol.

    Index 0 of the result is unused.
    """
    g = np.asarray(grid)
    occ = _occurrences(g, n_symbols)
    star_cols = [frozenset(np.flatnonzero(row == 0).tolist()) for row in g]
    result = np.full(n_symbols + 1, -1, dtype=np.int64)
    all_cols = range(g.shape[1])
    for s in range(1, n_symbols + 1):
        rows = {j for j, _ in occ[s]}
        common = set(all_cols)
        for j in rows:
            common &= star_cols[j]
        if common:
            result[s] = min(common)
    return result


def xor_into(dst, src):
    """dst ^= src in place; both buffers must have equal length."""
    n = len(dst)
    if len(src) != n:
        raise ValueError(f"length mismatch: {n} != {len(src)}")
    mixed = int.from_bytes(dst, "little") ^ int.from_bytes(src, "little")
    dst[:] = mixed.to_bytes(n, "little")
