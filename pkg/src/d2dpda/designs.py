"""Designs, resolutions and cross intersection numbers.

Point labels are arbitrary strings; internally points are dense 0-based
indices into ``Design.points``. A block is a sorted tuple of point indices
and ``Design.blocks`` is a multiset, so a block is identified by its
position, never by its contents.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from .finite_field import GeneratorMatrix, enumerate_codewords


class DesignError(ValueError):
    pass


class NoResolutionError(DesignError):
    pass


@dataclass(frozen=True)
class Design:
    points: tuple[str, ...]
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        points = tuple(str(p) for p in self.points)
        if len(set(points)) != len(points):
            raise DesignError("duplicate point labels")
        blocks = tuple(tuple(sorted(set(b))) for b in self.blocks)
        for i, b in enumerate(blocks):
            if not b:
                raise DesignError(f"block {i} is empty")
            if b[0] < 0 or b[-1] >= len(points):
                raise DesignError(f"block {i} is not a subset of the point set")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_labels(cls, points, blocks) -> "Design":
        """Build from point labels and blocks given as iterables of labels."""
        points = tuple(str(p) for p in points)
        index = {p: i for i, p in enumerate(points)}
        try:
            return cls(points, tuple(tuple(index[str(x)] for x in b) for b in blocks))
        except KeyError as exc:
            raise DesignError(f"block mentions unknown point {exc.args[0]!r}") from None

    @property
    def v(self) -> int:
        return len(self.points)

    @property
    def b(self) -> int:
        return len(self.blocks)

    def block_labels(self, i: int) -> tuple[str, ...]:
        return tuple(self.points[x] for x in self.blocks[i])

    def block_name(self, i: int) -> str:
        """Compact label, e.g. ``123`` for single-character points."""
        labels = self.block_labels(i)
        sep = "" if all(len(p) == 1 for p in self.points) else ","
        return sep.join(labels)


@dataclass(frozen=True)
class Resolution:
    """A design together with a partition of its blocks into parallel classes."""

    design: Design
    classes: tuple[tuple[int, ...], ...]
    _member: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = self.design
        classes = tuple(tuple(c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        seen = [i for c in classes for i in c]
        if sorted(seen) != list(range(d.b)):
            raise DesignError("every block must appear in exactly one parallel class")
        sizes = {len(b) for b in d.blocks}
        if len(sizes) != 1:
            raise DesignError("a resolution needs blocks of one common size")
        # member[j][x] = position within class j of the block holding x
        member = []
        for j, c in enumerate(classes):
            owner = [-1] * d.v
            for pos, bi in enumerate(c):
                for x in d.blocks[bi]:
                    if owner[x] != -1:
                        raise DesignError(f"class {j + 1} has overlapping blocks")
                    owner[x] = pos
            if -1 in owner:
                raise DesignError(f"class {j + 1} does not cover every point")
            member.append(tuple(owner))
        object.__setattr__(self, "_member", tuple(member))

    @property
    def r(self) -> int:
        return len(self.classes)

    @property
    def k(self) -> int:
        return len(self.design.blocks[0])

    @property
    def blocks_per_class(self) -> int:
        return self.design.v // self.k

    def block(self, j: int, i: int) -> tuple[int, ...]:
        """Points of the i-th block of class j (both 0-based)."""
        return self.design.blocks[self.classes[j][i]]

    def block_containing(self, j: int, x: int) -> int:
        """Position within class j of the block that contains point x."""
        return self._member[j][x]

    def ordered_blocks(self) -> list[tuple[int, int]]:
        """(class, position) pairs, class 1 first, blocks in class order."""
        return [(j, i) for j, c in enumerate(self.classes) for i in range(len(c))]

    def to_json(self) -> dict:
        d = self.design
        return {
            "points": list(d.points),
            "classes": [[list(d.block_labels(bi)) for bi in c] for c in self.classes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Resolution":
        try:
            points = data["points"]
            classes = data["classes"]
            blocks = [b for c in classes for b in c]
        except (KeyError, TypeError) as exc:
            raise DesignError(f"malformed design JSON: {exc}") from exc
        design = Design.from_labels(points, blocks)
        idx = itertools.count()
        return cls(design, tuple(tuple(next(idx) for _ in c) for c in classes))

    @classmethod
    def load(cls, path) -> "Resolution":
        return cls.from_json(json.loads(Path(path).read_text()))

    def describe(self) -> str:
        parts = []
        for j, c in enumerate(self.classes):
            names = ", ".join(self.design.block_name(bi) for bi in c)
            parts.append(f"P{j + 1} = {{{names}}}")
        return "; ".join(parts)


@dataclass(frozen=True)
class CrossProfile:
    mu: dict[int, int]
    r: int

    @property
    def crn(self) -> int | None:
        return max(self.mu) if self.mu else None

    @property
    def is_crd(self) -> bool:
        return bool(self.mu)

    @property
    def is_mcrd(self) -> bool:
        return self.crn == self.r


def grid_mcrd(n: int) -> Resolution:
    """Rows and columns of the n x n grid on points 1..n^2."""
    if n < 2:
        raise DesignError(f"grid MCRD needs n >= 2, got {n}")
    points = [str(x) for x in range(1, n * n + 1)]
    rows = [[i * n + c for c in range(n)] for i in range(n)]
    cols = [[i * n + c for i in range(n)] for c in range(n)]
    design = Design(tuple(points), tuple(map(tuple, rows + cols)))
    return Resolution(design, (tuple(range(n)), tuple(range(n, 2 * n))))


def design_from_code(g: GeneratorMatrix) -> Resolution:
    """Resolvable design whose points are codeword indices.

    Block (i, a) holds the codewords with value a at coordinate i; class i
    collects the q blocks of coordinate i, ordered by a.
    """
    zero = [i for i in range(g.n) if not any(row[i] for row in g.rows)]
    if zero:
        raise DesignError(f"generator column {zero[0] + 1} is zero; coordinate is constant")
    words = enumerate_codewords(g)
    points = tuple(str(x) for x in range(len(words)))
    blocks = []
    classes = []
    for i in range(g.n):
        cls_ = []
        for a in range(g.q):
            cls_.append(len(blocks))
            blocks.append(tuple(x for x, w in enumerate(words) if w[i] == a))
        classes.append(tuple(cls_))
    return Resolution(Design(points, tuple(blocks)), tuple(classes))


def _common_intersection(res: Resolution, i: int, masks) -> int | None:
    value = None
    for chosen in itertools.combinations(range(res.r), i):
        for pick in itertools.product(*(masks[j] for j in chosen)):
            acc = pick[0]
            for m in pick[1:]:
                acc &= m
            size = acc.bit_count()
            if size == 0 or (value is not None and size != value):
                return None
            value = size
    return value


def cross_profile(res: Resolution) -> CrossProfile:
    """Exhaustive cross intersection numbers mu_2 .. mu_r."""
    if res.r < 2:
        raise DesignError("cross intersection numbers need at least 2 classes")
    d = res.design
    masks = [
        [sum(1 << x for x in d.blocks[bi]) for bi in c] for c in res.classes
    ]
    mu = {}
    for i in range(2, res.r + 1):
        value = _common_intersection(res, i, masks)
        if value is not None:
            mu[i] = value
    return CrossProfile(mu=mu, r=res.r)


def find_resolution(d: Design, k: int | None = None) -> Resolution:
    """Partition the blocks of ``d`` into parallel classes by backtracking.

    Each new class starts from the lowest unassigned block and is completed
    with blocks in increasing index order, so the first resolution found is
    the lexicographically least one.
    """
    sizes = {len(b) for b in d.blocks}
    if len(sizes) != 1:
        raise DesignError("blocks have unequal sizes")
    (size,) = sizes
    if k is not None and k != size:
        raise DesignError(f"blocks have size {size}, expected {k}")
    if d.v % size:
        raise NoResolutionError(f"block size {size} does not divide v = {d.v}")
    per_class = d.v // size
    if d.b % per_class:
        raise NoResolutionError("number of blocks is not a multiple of v/k")

    full = (1 << d.v) - 1
    masks = [sum(1 << x for x in b) for b in d.blocks]
    used = [False] * d.b
    classes: list[list[int]] = []

    def fill(current: list[int], covered: int) -> bool:
        if covered == full:
            classes.append(list(current))
            if solve():
                return True
            classes.pop()
            return False
        low = (~covered & full & -(~covered & full)).bit_length() - 1
        for bi in range(current[-1] + 1, d.b):
            if used[bi] or masks[bi] & covered:
                continue
            if not any(
                not used[c] and not masks[c] & covered and masks[c] >> low & 1
                for c in range(bi, d.b)
            ):
                return False
            used[bi] = True
            current.append(bi)
            if fill(current, covered | masks[bi]):
                return True
            current.pop()
            used[bi] = False
        return False

    def solve() -> bool:
        first = next((i for i in range(d.b) if not used[i]), None)
        if first is None:
            return True
        used[first] = True
        ok = fill([first], masks[first])
        if not ok:
            used[first] = False
        return ok

    if not solve():
        raise NoResolutionError("the blocks admit no resolution")
    return Resolution(d, tuple(tuple(c) for c in classes))
