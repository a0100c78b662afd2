"""Clopen lex-intervals of b^w, depth partitions, and filterings.

A filtering is a b-branching system of nested interval partitions: the depth-d
partition has b^d right-closed cells and each cell splits into b consecutive
children one level down.  We store finitely many levels explicitly (the
"support") and extend deeper on demand by a fixed greedy rule, so every
Filtering value denotes one fully determined infinite object.

The greedy rule, per cell [lo, hi]: the next division point is the q-point
(eventually-max point) strictly between the previous pick and hi that has the
shortest stem, ties broken lexicographically.  The rule is deterministic and
reproduces the standard cylinder partition when started from the whole space.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .caps import default_depth_cap
from .points import (
    Node,
    Point,
    interval_successor,
    max_point,
    min_point,
    rank_word,
    word_rank,
)

__all__ = [
    "ClopenInterval",
    "DepthPartition",
    "Filtering",
    "FilteringReport",
    "RefinementReport",
    "partition_from_tuple",
    "validate_filtering",
    "refine_canonical",
    "is_refinement",
    "refinement_report",
    "cell_containing",
    "least_q_point_between",
    "canonical_split_maxima",
    "MATERIALIZE_LIMIT",
]

# boundary_tuple(d) materializes b^d - 1 points; refuse silly depths
MATERIALIZE_LIMIT = 1 << 21


@dataclass(frozen=True, slots=True)
class ClopenInterval:
    """[lo, hi] with lo eventually 0 and hi eventually b-1.

    Every nonempty clopen lex-interval of b^w has endpoints of exactly this
    shape, and conversely every such pair with lo < hi describes one.
    """

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        if self.lo.base != self.hi.base:
            raise ValueError("interval endpoints must share a base")
        if self.lo.tail != 0:
            raise ValueError(f"interval minimum must be eventually 0, got {self.lo}")
        if self.hi.tail != self.hi.base - 1:
            raise ValueError(f"interval maximum must be eventually max-digit, got {self.hi}")
        if not self.lo < self.hi:
            raise ValueError(f"empty interval: {self.lo} >= {self.hi}")

    @property
    def base(self) -> int:
        return self.lo.base

    @classmethod
    def whole(cls, base: int) -> "ClopenInterval":
        return cls(min_point(base), max_point(base))

    @classmethod
    def of_node(cls, s: Node) -> "ClopenInterval":
        return cls(s.min_point(), s.max_point())

    def contains(self, x: Point) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "ClopenInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "ClopenInterval") -> "ClopenInterval | None":
        lo = self.lo if other.lo < self.lo else other.lo
        hi = self.hi if self.hi < other.hi else other.hi
        return ClopenInterval(lo, hi) if lo < hi else None

    def to_json(self) -> dict:
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "ClopenInterval":
        return cls(Point.from_json(obj["lo"]), Point.from_json(obj["hi"]))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


class DepthPartition:
    """The b^k consecutive cells of one depth of a filtering."""

    __slots__ = ("base", "depth", "cells", "_maxima")

    def __init__(self, base: int, depth: int, cells: tuple[ClopenInterval, ...]):
        if len(cells) != base**depth:
            raise ValueError(f"depth-{depth} partition needs {base**depth} cells, got {len(cells)}")
        self.base = base
        self.depth = depth
        self.cells = cells
        self._maxima = [c.hi for c in cells]

    def index(self, x: Point) -> int:
        """Cell containing x under the right-closed convention."""
        if x.base != self.base:
            raise ValueError("base mismatch")
        return bisect_left(self._maxima, x)

    def boundary_tuple(self) -> tuple[Point, ...]:
        return tuple(self._maxima[:-1])

    def __iter__(self):
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)


def partition_from_tuple(base: int, depth: int, entries: tuple[Point, ...]) -> DepthPartition:
    """Cells of the unique consecutive-interval partition with these maxima."""
    if len(entries) != base**depth - 1:
        raise ValueError(
            f"depth-{depth} boundary tuple needs {base ** depth - 1} entries, got {len(entries)}"
        )
    for i, y in enumerate(entries):
        if y.base != base:
            raise ValueError(f"entry {i} has base {y.base}, expected {base}")
        if not y.is_q_point:
            raise ValueError(f"entry {i} is not an eventually-max interior point: {y}")
        if i > 0 and not entries[i - 1] < y:
            raise ValueError(f"entries not strictly increasing at position {i}")
    cells = []
    lo = min_point(base)
    for y in entries:
        cells.append(ClopenInterval(lo, y))
        lo = interval_successor(y)
    cells.append(ClopenInterval(lo, max_point(base)))
    return DepthPartition(base, depth, tuple(cells))


def cell_containing(p: DepthPartition, x: Point) -> int:
    return p.index(x)


def _least_q_stem_of_length(lower: Point, length: int) -> Point | None:
    """Least q-point with canonical stem length exactly `length` strictly
    above `lower`, or None when no such stem remains."""
    b = lower.base
    s = list(lower.prefix(length))
    while True:
        cand = Point(b, tuple(s), b - 1)
        if len(cand.stem) == length and cand > lower:
            return cand
        # bump to the lexicographically next stem of this length
        i = length - 1
        while i >= 0 and s[i] == b - 1:
            s[i] = 0
            i -= 1
        if i < 0:
            return None
        s[i] += 1


def least_q_point_between(lower: Point, hi: Point) -> Point:
    """The (stem-length, then lex)-least eventually-max point strictly
    between lower and hi.

    Exists whenever lower < hi and hi is a limit from below, i.e. hi is
    itself eventually max (every cell/split endpoint is).  The one way an
    order-open interval can be empty here is a successor pair: lower
    eventually max with hi its immediate eventually-zero successor."""
    if not lower < hi:
        raise ValueError(f"empty open interval ({lower}, {hi})")
    if lower.tail == lower.base - 1 and interval_successor(lower) == hi:
        raise ValueError(f"empty open interval ({lower}, {hi}): successor pair")
    length = 1
    while True:
        cand = _least_q_stem_of_length(lower, length)
        if cand is not None and cand < hi:
            return cand
        length += 1
        if length > 10_000:
            raise RuntimeError("greedy split failed to terminate; invariant broken")


def canonical_split_maxima(cell: ClopenInterval) -> tuple[Point, ...]:
    """The b-1 greedy division points of a cell.

    Pick p is the (stem-length, lex)-least q-point strictly between pick p-1
    (the cell minimum for p = 0) and the cell maximum.  Restarting the length
    search per pick is sound: lengths that failed against hi keep failing.
    """
    b = cell.base
    picks: list[Point] = []
    prev = cell.lo
    for _ in range(b - 1):
        prev = least_q_point_between(prev, cell.hi)
        picks.append(prev)
    return tuple(picks)


class Filtering:
    """Explicit boundary levels for depths 1..support, greedy rule beyond.

    levels[j] holds the depth-(j+1) boundary tuple: the b^(j+1) - 1 cell
    maxima except the global maximum.  Instances are immutable in value;
    internal memo tables only cache the deterministic extension, so sharing
    across threads is safe and extension is idempotent.
    """

    __slots__ = ("base", "levels", "_split_memo", "_cell_memo", "_word_splits")

    def __init__(self, base: int, levels: tuple[tuple[Point, ...], ...] = ()):
        self.base = base
        self.levels = tuple(tuple(level) for level in levels)
        self._split_memo: dict[ClopenInterval, tuple[Point, ...]] = {}
        self._cell_memo: dict[tuple[int, ...], ClopenInterval] = {}
        self._word_splits: dict[tuple[int, ...], tuple[Point, ...]] = {}

    @property
    def support(self) -> int:
        return len(self.levels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Filtering):
            return NotImplemented
        return self.base == other.base and self.levels == other.levels

    def __hash__(self) -> int:
        return hash((self.base, self.levels))

    def __repr__(self) -> str:
        return f"Filtering(b={self.base}, support={self.support})"

    # -- cells ---------------------------------------------------------

    def _canonical_splits(self, cell: ClopenInterval) -> tuple[Point, ...]:
        got = self._split_memo.get(cell)
        if got is None:
            got = canonical_split_maxima(cell)
            self._split_memo[cell] = got
        return got

    def _stored_cell(self, word: tuple[int, ...]) -> ClopenInterval:
        d = len(word)
        if d == 0:
            return ClopenInterval.whole(self.base)
        level = self.levels[d - 1]
        r = word_rank(word, self.base)
        lo = interval_successor(level[r - 1]) if r > 0 else min_point(self.base)
        hi = level[r] if r < len(level) else max_point(self.base)
        return ClopenInterval(lo, hi)

    @staticmethod
    def _child_interval(cell: ClopenInterval, splits: tuple[Point, ...], digit: int) -> ClopenInterval:
        lo = cell.lo if digit == 0 else interval_successor(splits[digit - 1])
        hi = splits[digit] if digit < len(splits) else cell.hi
        return ClopenInterval(lo, hi)

    def cell(self, word: tuple[int, ...]) -> ClopenInterval:
        """The depth-len(word) cell at this word's lex position."""
        d = len(word)
        if d <= self.support:
            return self._stored_cell(word)
        got = self._cell_memo.get(word)
        if got is None:
            parent = self.cell(word[:-1])
            got = self._child_interval(parent, self.child_maxima(word[:-1]), word[-1])
            self._cell_memo[word] = got
        return got

    def child_maxima(self, word: tuple[int, ...]) -> tuple[Point, ...]:
        """The b-1 division points of cell(word) one level down."""
        d = len(word)
        if d < self.support:
            level = self.levels[d]
            r = word_rank(word, self.base)
            return level[r * self.base : r * self.base + self.base - 1]
        got = self._word_splits.get(word)
        if got is None:
            got = self._canonical_splits(self.cell(word))
            self._word_splits[word] = got
        return got

    # -- boundary tuples -----------------------------------------------

    def boundary_entry(self, depth: int, index: int) -> Point:
        """Entry of the depth-d boundary tuple without materializing it."""
        if not 1 <= depth:
            raise ValueError("boundary tuples exist for depth >= 1")
        if not 0 <= index < self.base**depth - 1:
            raise ValueError(f"index {index} out of range at depth {depth}")
        if depth <= self.support:
            return self.levels[depth - 1][index]
        r, p = divmod(index, self.base)
        if p == self.base - 1:
            # position b*r + b-1 carries the depth-(d-1) maximum unchanged
            return self.boundary_entry(depth - 1, r)
        return self.child_maxima(rank_word(r, depth - 1, self.base))[p]

    def boundary_tuple(self, depth: int) -> tuple[Point, ...]:
        count = self.base**depth - 1
        if count > MATERIALIZE_LIMIT:
            raise ValueError(f"depth {depth} boundary tuple has {count} entries; over limit")
        if depth == 0:
            return ()
        if depth <= self.support:
            return self.levels[depth - 1]
        prev = self.boundary_tuple(depth - 1)
        out: list[Point] = []
        lo = min_point(self.base)
        for r in range(self.base ** (depth - 1)):
            hi = prev[r] if r < len(prev) else max_point(self.base)
            cell = ClopenInterval(lo, hi)
            out.extend(self._canonical_splits(cell))
            if r < len(prev):
                out.append(hi)
                lo = interval_successor(hi)
        return tuple(out)

    def extend(self, depth: int) -> "Filtering":
        """A filtering equal to this one with support at least `depth`."""
        if depth <= self.support:
            return self
        levels = list(self.levels)
        for d in range(self.support + 1, depth + 1):
            levels.append(self.boundary_tuple(d))
        return Filtering(self.base, tuple(levels))

    def partition(self, depth: int) -> DepthPartition:
        return partition_from_tuple(self.base, depth, self.boundary_tuple(depth))

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "b": self.base,
            "depth": self.support,
            "boundaries": [[p.to_json() for p in level] for level in self.levels],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Filtering":
        try:
            base = int(obj["b"])
            raw = obj["boundaries"]
            depth = int(obj.get("depth", len(raw)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed filtering object: {exc}") from exc
        if depth != len(raw):
            raise ValueError(f"declared depth {depth} but {len(raw)} boundary levels")
        levels = tuple(tuple(Point.from_json(p) for p in level) for level in raw)
        f = cls(base, levels)
        report = validate_filtering(f)
        if not report.ok:
            raise ValueError(f"invalid filtering: {report.message}")
        return f


@dataclass(frozen=True, slots=True)
class FilteringReport:
    ok: bool
    clause: str = ""
    path: tuple[int, ...] = ()
    message: str = ""


def validate_filtering(f: Filtering) -> FilteringReport:
    """Check the stored levels form nested proper partitions.

    Verified per level: entry count, entries interior eventually-max points,
    strict increase, and that each level subsamples to the one above.  The
    cell intervals themselves are derived data, so these four checks pin the
    whole structure.
    """
    b = f.base
    for j, level in enumerate(f.levels):
        depth = j + 1
        want = b**depth - 1
        if len(level) != want:
            return FilteringReport(
                False, "length", (depth,), f"depth {depth} has {len(level)} entries, needs {want}"
            )
        for i, y in enumerate(level):
            if y.base != b:
                return FilteringReport(False, "entry", (depth, i), f"entry base {y.base} != {b}")
            if not y.is_q_point:
                return FilteringReport(
                    False, "entry", (depth, i), f"entry {y} not an interior eventually-max point"
                )
            if i > 0 and not level[i - 1] < y:
                return FilteringReport(
                    False, "increasing", (depth, i), f"entries {i - 1},{i} out of order at depth {depth}"
                )
        if j > 0:
            above = f.levels[j - 1]
            for i, y in enumerate(above):
                if level[b * i + b - 1] != y:
                    return FilteringReport(
                        False,
                        "nesting",
                        (depth, b * i + b - 1),
                        f"depth-{depth} tuple does not carry depth-{j} maximum {i}",
                    )
    return FilteringReport(True)


def refine_canonical(f: Filtering, depth: int) -> Filtering:
    """Materialize the greedy extension down to `depth`.  Deterministic and
    monotone: refining to d then d' equals refining straight to d'."""
    return f.extend(depth)


@dataclass(frozen=True, slots=True)
class RefinementReport:
    verdict: str  # "yes" | "undecided_at_cap"
    witness: Point | None = None
    searched_depth: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict == "yes"


def refinement_report(v: Filtering, u: Filtering, depth: int, cap: int | None = None) -> RefinementReport:
    """Does every depth-<=depth boundary of v occur among u's boundaries?

    Each boundary y of v is tracked down u's cell chain; hitting a cell
    maximum certifies membership.  A y still strictly interior at `cap` is
    reported undecided: deeper maxima may yet equal y, so a hard "no" has no
    finite certificate in this representation.
    """
    if v.base != u.base:
        raise ValueError("base mismatch")
    if cap is None:
        cap = default_depth_cap()
    for y in v.boundary_tuple(depth):
        word: tuple[int, ...] = ()
        while True:
            cell = u.cell(word)
            if y == cell.hi:
                break
            if len(word) >= cap:
                return RefinementReport("undecided_at_cap", y, cap)
            splits = u.child_maxima(word)
            word = word + (bisect_left(list(splits), y),)
    return RefinementReport("yes", None, depth)


def is_refinement(v: Filtering, u: Filtering, depth: int, cap: int | None = None) -> bool:
    return refinement_report(v, u, depth, cap).holds
