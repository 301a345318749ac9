"""Placement delivery arrays: representation, PDA/DPDA validation and phi.

Rows, columns and users are 0-based in the Python API. Text renderings,
violation messages and the JSON/CSV formats use 1-based indices.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Hashable, Mapping

import numpy as np

from . import kernels


class _Star:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "STAR"

    def __str__(self):
        return "*"

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


class ArrayFormatError(ValueError):
    """Raised for ragged grids and unparseable array files."""


class InvalidArrayError(ValueError):
    """Raised when an array breaks one or more PDA/DPDA conditions."""

    def __init__(self, violations, params=None):
        self.violations = list(violations)
        self.params = params
        lines = "\n".join(f"  {v}" for v in self.violations)
        super().__init__(f"{len(self.violations)} violation(s):\n{lines}")


@dataclass(frozen=True)
class Violation:
    condition: str
    rows: tuple[int, ...] = ()
    cols: tuple[int, ...] = ()
    symbol: Hashable | None = None
    message: str = ""

    def __str__(self):
        where = []
        if self.symbol is not None:
            where.append(f"symbol {self.symbol}")
        if self.rows:
            where.append("rows " + ",".join(str(j + 1) for j in self.rows))
        if self.cols:
            where.append("cols " + ",".join(str(k + 1) for k in self.cols))
        loc = f" [{'; '.join(where)}]" if where else ""
        return f"{self.condition}{loc}: {self.message}"


@dataclass(frozen=True)
class PdaArray:
    """An F x K grid whose cells are ``STAR`` or a hashable symbol."""

    entries: tuple[tuple, ...]
    row_labels: tuple[str, ...] | None = None
    col_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        if not entries or not entries[0]:
            raise ArrayFormatError("array must have at least one row and one column")
        width = len(entries[0])
        for j, row in enumerate(entries):
            if len(row) != width:
                raise ArrayFormatError(
                    f"ragged grid: row {j + 1} has {len(row)} entries, expected {width}"
                )
        object.__setattr__(self, "entries", entries)
        if self.row_labels is not None:
            labels = tuple(map(str, self.row_labels))
            if len(labels) != len(entries):
                raise ArrayFormatError("row label count does not match rows")
            object.__setattr__(self, "row_labels", labels)
        if self.col_labels is not None:
            labels = tuple(map(str, self.col_labels))
            if len(labels) != width:
                raise ArrayFormatError("column label count does not match columns")
            object.__setattr__(self, "col_labels", labels)

    @property
    def F(self) -> int:
        return len(self.entries)

    @property
    def K(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.F, self.K

    def __getitem__(self, jk):
        j, k = jk
        return self.entries[j][k]

    def symbols(self) -> list:
        """Distinct symbols in row-major first-occurrence order."""
        seen = {}
        for row in self.entries:
            for e in row:
                if e is not STAR and e not in seen:
                    seen[e] = None
        return list(seen)

    def symbol_counts(self) -> Counter:
        return Counter(e for row in self.entries for e in row if e is not STAR)

    def star_columns(self, j: int) -> list[int]:
        return [k for k, e in enumerate(self.entries[j]) if e is STAR]

    def column_star_counts(self) -> list[int]:
        return [sum(row[k] is STAR for row in self.entries) for k in range(self.K)]

    def row_star_counts(self) -> list[int]:
        return [sum(e is STAR for e in row) for row in self.entries]

    def cells(self, symbol) -> list[tuple[int, int]]:
        return [
            (j, k)
            for j, row in enumerate(self.entries)
            for k, e in enumerate(row)
            if e == symbol and e is not STAR
        ]

    def encoded(self) -> tuple[np.ndarray, list]:
        """int32 grid with 0 for stars and 1..S in first-occurrence order.

        Returns the grid and the list of original symbols (entry i is the
        symbol encoded as i + 1).
        """
        order = self.symbols()
        code = {s: i + 1 for i, s in enumerate(order)}
        grid = np.array(
            [[0 if e is STAR else code[e] for e in row] for row in self.entries],
            dtype=np.int32,
        )
        return grid, order

    def with_entry(self, j: int, k: int, value) -> "PdaArray":
        rows = [list(r) for r in self.entries]
        rows[j][k] = value
        return PdaArray(tuple(map(tuple, rows)), self.row_labels, self.col_labels)

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "rows": self.F,
            "cols": self.K,
            "entries": [["*" if e is STAR else e for e in row] for row in self.entries],
        }
        if self.row_labels is not None:
            out["row_labels"] = list(self.row_labels)
        if self.col_labels is not None:
            out["col_labels"] = list(self.col_labels)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "PdaArray":
        try:
            raw = data["entries"]
            rows = []
            for row in raw:
                cells = []
                for e in row:
                    if e == "*":
                        cells.append(STAR)
                    elif isinstance(e, int) and not isinstance(e, bool) and e >= 1:
                        cells.append(e)
                    else:
                        raise ArrayFormatError(
                            f"entry {e!r} is neither '*' nor an integer >= 1"
                        )
                rows.append(tuple(cells))
        except (KeyError, TypeError) as exc:
            raise ArrayFormatError(f"malformed array JSON: {exc}") from exc
        arr = cls(tuple(rows), data.get("row_labels"), data.get("col_labels"))
        if "rows" in data and data["rows"] != arr.F:
            raise ArrayFormatError(f"'rows' is {data['rows']} but grid has {arr.F}")
        if "cols" in data and data["cols"] != arr.K:
            raise ArrayFormatError(f"'cols' is {data['cols']} but grid has {arr.K}")
        return arr

    @classmethod
    def load(cls, path) -> "PdaArray":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ArrayFormatError(f"{path}: {exc}") from exc
        return cls.from_json(data)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = self.col_labels or [str(k + 1) for k in range(self.K)]
        rows = self.row_labels or [str(j + 1) for j in range(self.F)]
        w.writerow(["", *cols])
        for label, row in zip(rows, self.entries):
            w.writerow([label, *(format_symbol(e) for e in row)])
        return buf.getvalue()

    def render(self) -> str:
        """Aligned text table."""
        cols = list(self.col_labels or [str(k + 1) for k in range(self.K)])
        rows = list(self.row_labels or [str(j + 1) for j in range(self.F)])
        body = [[format_symbol(e) for e in row] for row in self.entries]
        width = max(len(c) for c in cols + [x for r in body for x in r])
        lw = max(len(r) for r in rows)
        lines = [" " * lw + " | " + " ".join(c.rjust(width) for c in cols)]
        lines.append("-" * len(lines[0]))
        for label, row in zip(rows, body):
            lines.append(label.rjust(lw) + " | " + " ".join(x.rjust(width) for x in row))
        return "\n".join(lines)


def format_symbol(e) -> str:
    if e is STAR:
        return "*"
    if isinstance(e, frozenset):
        return "".join(sorted(map(str, e), key=_natural))
    if isinstance(e, tuple) and len(e) == 2:
        return f"{e[0]}_{e[1]}"
    return str(e)


def _natural(label: str):
    return (0, int(label)) if label.isdigit() else (1, label)


def array_from_rows(rows, row_labels=None, col_labels=None) -> PdaArray:
    """Convenience constructor: ``"*"`` or ``None`` cells become STAR."""
    return PdaArray(
        tuple(tuple(STAR if e in ("*", None) else e for e in r) for r in rows),
        row_labels,
        col_labels,
    )


# -- validation ---------------------------------------------------------


def _int_symbols(a: PdaArray) -> bool:
    return all(isinstance(s, int) and not isinstance(s, bool) for s in a.symbols())


def ordered_symbols(a: PdaArray) -> list:
    """Integer symbols ascending; opaque symbols in first-occurrence order."""
    syms = a.symbols()
    return sorted(syms) if _int_symbols(a) else syms


def symbol_count(a: PdaArray) -> int:
    """S: the largest integer symbol, or the number of distinct opaque symbols."""
    syms = a.symbols()
    if syms and _int_symbols(a):
        return max(syms)
    return len(syms)


def pda_violations(a: PdaArray) -> list[Violation]:
    """Every violated PDA condition, collected without early exit."""
    out: list[Violation] = []
    F, K = a.shape
    stars = a.column_star_counts()
    tally = Counter(stars)
    z = min(tally, key=lambda c: (-tally[c], c))
    for k, c in enumerate(stars):
        if c != z:
            out.append(Violation(
                "C1", cols=(k,),
                message=f"column has {c} stars, most columns have {z}",
            ))
    if len(tally) == 1 and not 0 < z < F:
        out.append(Violation("C1", message=f"star count Z={z} must satisfy 0 < Z < F={F}"))

    if _int_symbols(a):
        present = set(a.symbols())
        for s in range(1, symbol_count(a) + 1):
            if s not in present:
                out.append(Violation("C2", symbol=s, message="integer in [S] never occurs"))
        for s in present:
            if s < 1:
                out.append(Violation("C2", symbol=s, message="symbols must be integers >= 1"))

    grid, order = a.encoded()
    for kind, s, j1, k1, j2, k2 in kernels.pair_violations(grid, len(order)):
        sym = order[s - 1]
        if kind == 0:
            if j1 == j2:
                msg = "symbol repeats within a row"
            else:
                msg = "symbol repeats within a column"
            out.append(Violation("C3a", rows=(j1, j2), cols=(k1, k2), symbol=sym, message=msg))
        else:
            missing = []
            if a[j1, k2] is not STAR:
                missing.append(f"({j1 + 1},{k2 + 1})")
            if a[j2, k1] is not STAR:
                missing.append(f"({j2 + 1},{k1 + 1})")
            out.append(Violation(
                "C3b", rows=(j1, j2), cols=(k1, k2), symbol=sym,
                message="required star missing at " + " and ".join(missing),
            ))
    return out


@dataclass(frozen=True)
class SchemeParams:
    """(K, F, Z, S) with exact M/N = Z/F and R = S/F.

    ``S`` and ``Z`` are None for cataloged schemes known only by formula.
    ``exact`` is False when a field could only be approximated.
    """

    K: int
    F: int
    memory_ratio: Fraction | float
    load: Fraction
    Z: int | None = None
    S: int | None = None
    scheme: str = ""
    exact: bool = True

    def __post_init__(self):
        if self.Z is not None and not 0 < self.Z < self.F:
            raise ValueError(f"need 0 < Z < F, got Z={self.Z}, F={self.F}")
        if self.exact and not isinstance(self.memory_ratio, Fraction):
            raise TypeError("memory_ratio must be a Fraction")
        if not isinstance(self.load, Fraction):
            raise TypeError("load must be a Fraction")

    @classmethod
    def from_array(cls, K: int, F: int, Z: int, S: int, scheme: str = "") -> "SchemeParams":
        return cls(K=K, F=F, Z=Z, S=S, memory_ratio=Fraction(Z, F), load=Fraction(S, F),
                   scheme=scheme)

    @property
    def tuple4(self) -> tuple:
        return (self.K, self.F, self.Z, self.S)

    def to_json(self) -> dict:
        out = {
            "scheme": self.scheme,
            "K": self.K,
            "M_over_N": format_ratio(self.memory_ratio),
            "F": self.F,
            "R": format_ratio(self.load),
        }
        if self.Z is not None:
            out["Z"] = self.Z
        if self.S is not None:
            out["S"] = self.S
        return out

    def __str__(self):
        core = f"({self.K},{self.F},{self.Z},{self.S})" if self.S is not None else f"K={self.K}, F={self.F}"
        return f"{core} M/N={format_ratio(self.memory_ratio)} R={format_ratio(self.load)}"


def format_ratio(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    return repr(x)


def validate_pda(a: PdaArray) -> SchemeParams:
    """Return (K, F, Z, S) or raise InvalidArrayError listing every violation."""
    violations = pda_violations(a)
    if violations:
        raise InvalidArrayError(violations)
    return SchemeParams.from_array(a.K, a.F, a.column_star_counts()[0], symbol_count(a))


def is_pda(a: PdaArray) -> bool:
    return not pda_violations(a)


def regularity(a: PdaArray) -> int | None:
    """g if every symbol occurs exactly g times, else None."""
    counts = set(a.symbol_counts().values())
    return counts.pop() if len(counts) == 1 else None


def irregular_symbols(a: PdaArray) -> dict:
    """Symbols whose multiplicity differs from the most common one."""
    counts = a.symbol_counts()
    if not counts:
        return {}
    tally = Counter(counts.values())
    mode = min(tally, key=lambda c: (-tally[c], c))
    return {s: c for s, c in counts.items() if c != mode}


# -- DPDA ---------------------------------------------------------------


def derive_phi(a: PdaArray) -> dict:
    """Map each symbol to the smallest column starred in every row holding it.

    Symbols with no such column map to None.
    """
    grid, order = a.encoded()
    cand = kernels.phi_candidates(grid, len(order))
    return {s: (int(cand[i + 1]) if cand[i + 1] >= 0 else None) for i, s in enumerate(order)}


def phi_violations(a: PdaArray, phi: Mapping) -> list[Violation]:
    out = []
    for s in a.symbols():
        col = phi.get(s)
        if col is None:
            out.append(Violation("C4", symbol=s, message="no user caches every row holding this symbol"))
            continue
        if not 0 <= col < a.K:
            out.append(Violation("C4", symbol=s, cols=(), message=f"phi maps to column {col + 1} outside [K]"))
            continue
        bad = tuple(j for j, _ in a.cells(s) if a[j, col] is not STAR)
        if bad:
            out.append(Violation(
                "C4", rows=bad, cols=(col,), symbol=s,
                message=f"phi(s) = column {col + 1} lacks a star in these rows",
            ))
    return out


@dataclass(frozen=True)
class Dpda:
    array: PdaArray
    phi: dict = field(hash=False)
    params: SchemeParams = field(hash=False)

    @property
    def K(self) -> int:
        return self.array.K

    @property
    def F(self) -> int:
        return self.array.F

    @property
    def Z(self) -> int:
        return self.params.Z

    @property
    def S(self) -> int:
        return self.params.S

    def phi_is_identity(self) -> bool:
        """True when integer symbol s is sent by user s (1-based)."""
        return all(isinstance(s, int) and c == s - 1 for s, c in self.phi.items())

    def phi_json(self) -> dict:
        return {str(s): c + 1 for s, c in self.phi.items()}


def validate_dpda(a: PdaArray, phi: Mapping | None = None) -> Dpda:
    """Check C1-C4, deriving phi when none is given.

    Raises InvalidArrayError with every violation; ``params`` on the error
    is set when only C4 fails.
    """
    violations = pda_violations(a)
    if violations:
        raise InvalidArrayError(violations)
    params = validate_pda(a)
    if phi is None:
        phi = derive_phi(a)
    else:
        phi = dict(phi)
    bad = phi_violations(a, phi)
    if bad:
        raise InvalidArrayError(bad, params=params)
    return Dpda(a, {s: phi[s] for s in a.symbols()}, params)


def load_phi(path) -> dict:
    """Read a phi file: ``{"symbol": column}`` with 1-based columns."""
    try:
        raw = json.loads(Path(path).read_text())
        return {int(s): int(c) - 1 for s, c in raw.items()}
    except (json.JSONDecodeError, ValueError, AttributeError) as exc:
        raise ArrayFormatError(f"{path}: malformed phi file: {exc}") from exc


# -- relabeling ---------------------------------------------------------


def canonical_mapping(a: PdaArray) -> dict:
    return {s: i + 1 for i, s in enumerate(a.symbols())}


def canonicalize(a: PdaArray) -> PdaArray:
    """Rename symbols to 1..S by row-major first occurrence."""
    m = canonical_mapping(a)
    return PdaArray(
        tuple(tuple(e if e is STAR else m[e] for e in row) for row in a.entries),
        a.row_labels,
        a.col_labels,
    )


def equivalent(a: PdaArray, b: PdaArray) -> bool:
    """Same grid up to a renaming of symbols (row/column order fixed)."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return canonicalize(a).entries == canonicalize(b).entries

