"""DPDA constructions from cross resolvable designs with mu_2 = 1.

* ``construct_general`` — rows are points, columns are blocks; a non-star
  cell (x, A) holds the pair {x, y} where y is the point shared by A and the
  block of the next class that contains x. Classes are taken cyclically.
* ``construct_I`` — the two-class grid case, checked against the
  (2n, n^2, n, n^2(n-1)) parameter contract.
* ``construct_II`` — rows are blocks, columns are points; a non-star cell
  holds (y, alpha) where alpha numbers the occurrences of y in that row from
  left to right. Symbol (y, alpha) is sent by user y.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

from .designs import Resolution, cross_profile
from .pda import STAR, Dpda, PdaArray, canonical_mapping, canonicalize, format_symbol, validate_dpda


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructedDpda:
    dpda: Dpda
    symbolic: PdaArray
    construction: str
    resolution: Resolution
    symbolic_phi: dict

    @property
    def array(self) -> PdaArray:
        return self.dpda.array

    @property
    def params(self):
        return self.dpda.params

    def to_json(self) -> dict:
        out = self.dpda.array.to_json()
        out["phi"] = self.dpda.phi_json()
        out["symbolic_entries"] = [
            [format_symbol(e) for e in row] for row in self.symbolic.entries
        ]
        out["construction"] = self.construction
        out["design"] = self.resolution.to_json()
        out["params"] = self.params.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def render(self) -> str:
        return self.symbolic.render()


def _require_mu2(res: Resolution) -> None:
    if res.r < 2:
        raise ConstructionError(f"need at least 2 parallel classes, got {res.r}")
    mu = cross_profile(res).mu.get(2)
    if mu != 1:
        got = "undefined" if mu is None else str(mu)
        raise ConstructionError(f"design must have mu_2 = 1 (got {got})")


def _successor_point(res: Resolution, j: int, i: int, x: int) -> int:
    """The single point of block (j, i) inside the next class's block through x."""
    nxt = (j + 1) % res.r
    other = res.block(nxt, res.block_containing(nxt, x))
    (y,) = set(res.block(j, i)) & set(other)
    return y


def _finish(symbolic: PdaArray, sym_phi: dict, res: Resolution, name: str) -> ConstructedDpda:
    mapping = canonical_mapping(symbolic)
    canon = canonicalize(symbolic)
    phi = {mapping[s]: c for s, c in sym_phi.items()}
    dpda = validate_dpda(canon, phi)
    return ConstructedDpda(dpda, symbolic, name, res, sym_phi)


def construct_general(crd: Resolution) -> ConstructedDpda:
    """(b, v, k, C(k,2) b) DPDA from any resolvable design with mu_2 = 1."""
    _require_mu2(crd)
    d = crd.design
    cols = crd.ordered_blocks()
    rows = []
    sym_phi = {}
    col_of_block = {crd.classes[j][i]: c for c, (j, i) in enumerate(cols)}
    for x in range(d.v):
        row = []
        for j, i in cols:
            if x in crd.block(j, i):
                row.append(STAR)
                continue
            y = _successor_point(crd, j, i, x)
            sym = frozenset((d.points[x], d.points[y]))
            if sym not in sym_phi:
                nxt = (j + 1) % crd.r
                holder = crd.classes[nxt][crd.block_containing(nxt, x)]
                sym_phi[sym] = col_of_block[holder]
            row.append(sym)
        rows.append(tuple(row))
    symbolic = PdaArray(
        tuple(rows),
        row_labels=d.points,
        col_labels=tuple(d.block_name(crd.classes[j][i]) for j, i in cols),
    )
    out = _finish(symbolic, sym_phi, crd, "general")
    k = crd.k
    expected = (d.b, d.v, k, comb(k, 2) * d.b)
    if out.params.tuple4 != expected:
        raise ConstructionError(f"parameters {out.params.tuple4} differ from {expected}")
    return out


def _grid_shape(mcrd: Resolution, n: int | None) -> int:
    if mcrd.r != 2:
        raise ConstructionError(f"need exactly 2 parallel classes, got {mcrd.r}")
    k = mcrd.k
    if n is None:
        n = k
    if k != n or mcrd.design.v != n * n:
        raise ConstructionError(f"need {n} blocks of size {n} per class on {n * n} points")
    if n < 2:
        raise ConstructionError("need n >= 2")
    return n


def construct_I(mcrd: Resolution, n: int | None = None) -> ConstructedDpda:
    """(2n, n^2, n, n^2(n-1)) DPDA: M/N = 1/n, R = n - 1."""
    n = _grid_shape(mcrd, n)
    out = construct_general(mcrd)
    expected = (2 * n, n * n, n, n * n * (n - 1))
    if out.params.tuple4 != expected:
        raise ConstructionError(f"parameters {out.params.tuple4} differ from {expected}")
    return ConstructedDpda(out.dpda, out.symbolic, "I", mcrd, out.symbolic_phi)


def construct_II(mcrd: Resolution, n: int | None = None) -> ConstructedDpda:
    """(n^2, 2n, 2, n^2(n-1)) DPDA: M/N = 1/n, R = n(n-1)/2."""
    n = _grid_shape(mcrd, n)
    _require_mu2(mcrd)
    d = mcrd.design
    blocks = mcrd.ordered_blocks()
    rows = []
    sym_phi = {}
    for j, i in blocks:
        seen: dict[int, int] = {}
        row = []
        for x in range(d.v):
            if x in mcrd.block(j, i):
                row.append(STAR)
                continue
            y = _successor_point(mcrd, j, i, x)
            seen[y] = seen.get(y, 0) + 1
            sym = (d.points[y], seen[y])
            sym_phi[sym] = y
            row.append(sym)
        rows.append(tuple(row))
    symbolic = PdaArray(
        tuple(rows),
        row_labels=tuple(d.block_name(mcrd.classes[j][i]) for j, i in blocks),
        col_labels=d.points,
    )
    out = _finish(symbolic, sym_phi, mcrd, "II")
    expected = (n * n, 2 * n, 2, n * n * (n - 1))
    if out.params.tuple4 != expected:
        raise ConstructionError(f"parameters {out.params.tuple4} differ from {expected}")
    return out
