"""Prime-field arithmetic and codeword enumeration for linear codes.

Only prime fields GF(q) are supported. Elements are plain ints in [0, q).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path


class FieldError(ValueError):
    pass


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of integers modulo a prime ``q``."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not is_prime(self.q):
            raise FieldError(f"field modulus must be prime, got {self.q!r}")

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 0 <= x < self.q:
                raise FieldError(f"{x} is not an element of GF({self.q})")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        self._check(a, b)
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        self._check(a)
        return -a % self.q

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return a * b % self.q

    def inv(self, b: int) -> int:
        self._check(b)
        if b == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
        return pow(b, -1, self.q)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        return range(self.q)


def rank_mod_p(rows, q: int) -> int:
    """Rank of an integer matrix over GF(q) by Gaussian elimination."""
    m = [[x % q for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, q)
        m[rank] = [x * inv % q for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class GeneratorMatrix:
    """A full-rank k x n generator matrix of an (n, k) linear code over GF(q)."""

    q: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        PrimeField(self.q)
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or not rows[0]:
            raise FieldError("generator matrix must be non-empty")
        if any(len(r) != len(rows[0]) for r in rows):
            raise FieldError("generator matrix rows have unequal lengths")
        for r in rows:
            for x in r:
                if not 0 <= x < self.q:
                    raise FieldError(f"entry {x} is not in GF({self.q})")
        if rank_mod_p(rows, self.q) != len(rows):
            raise FieldError(f"generator matrix is rank-deficient over GF({self.q})")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.q)

    @classmethod
    def from_json(cls, data: dict) -> "GeneratorMatrix":
        try:
            return cls(q=int(data["q"]), rows=data["rows"])
        except (KeyError, TypeError) as exc:
            raise FieldError(f"malformed generator matrix JSON: {exc}") from exc

    @classmethod
    def load(cls, path) -> "GeneratorMatrix":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {"q": self.q, "rows": [list(r) for r in self.rows]}


def message(index: int, q: int, k: int) -> tuple[int, ...]:
    """Base-q digits of ``index``, most significant first, padded to length k."""
    digits = []
    for _ in range(k):
        index, d = divmod(index, q)
        digits.append(d)
    if index:
        raise ValueError("index out of range")
    return tuple(reversed(digits))


def encode(g: GeneratorMatrix, msg) -> tuple[int, ...]:
    q = g.q
    return tuple(
        sum(m * g.rows[i][c] for i, m in enumerate(msg)) % q for c in range(g.n)
    )


def enumerate_codewords(g: GeneratorMatrix) -> list[tuple[int, ...]]:
    """All q^k codewords; entry i encodes the base-q (MSB-first) digits of i."""
    # itertools.product over digits is already MSB-first lexicographic order
    return [encode(g, m) for m in itertools.product(range(g.q), repeat=g.k)]
