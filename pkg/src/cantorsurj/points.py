"""Exact points of the digit space b^w.

Only eventually constant sequences are first-class values here: a point is a
finite stem over {0, ..., b-1} followed by a single digit repeated forever.
Every boundary object downstream (interval endpoints, partition maxima,
fingerprints) lives in this set, so order and equality must be exact; no
floats appear anywhere in this module.

Canonical form: the stem never ends with the tail digit.  With that
normalization, structural equality of (stem, tail) coincides with equality
as infinite sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

__all__ = [
    "LT",
    "EQ",
    "GT",
    "Point",
    "Node",
    "Dyadic",
    "lex_compare",
    "rho",
    "min_point",
    "max_point",
    "node_max",
    "node_min",
    "interval_successor",
    "interval_predecessor",
    "encode_binary",
    "iter_points",
    "word_rank",
    "rank_word",
    "load_point",
]

LT, EQ, GT = -1, 0, 1


def _check_base(base: int) -> None:
    if not isinstance(base, int) or base < 2:
        raise ValueError(f"base must be an integer >= 2, got {base!r}")


def _check_digit(d: int, base: int) -> None:
    if not isinstance(d, int) or not 0 <= d < base:
        raise ValueError(f"digit {d!r} out of range for base {base}")


@dataclass(frozen=True, slots=True)
class Point:
    """An eventually constant sequence over {0, ..., base-1}.

    The constructor canonicalizes: trailing stem digits equal to the tail
    are stripped, so two Points are equal iff they denote the same sequence.
    """

    base: int
    stem: tuple[int, ...] = ()
    tail: int = 0

    def __post_init__(self) -> None:
        _check_base(self.base)
        _check_digit(self.tail, self.base)
        stem = tuple(self.stem)
        for d in stem:
            _check_digit(d, self.base)
        while stem and stem[-1] == self.tail:
            stem = stem[:-1]
        object.__setattr__(self, "stem", stem)

    def digit(self, n: int) -> int:
        return self.stem[n] if n < len(self.stem) else self.tail

    def prefix(self, n: int) -> tuple[int, ...]:
        """First n digits, tail included."""
        if n <= len(self.stem):
            return self.stem[:n]
        return self.stem + (self.tail,) * (n - len(self.stem))

    @property
    def is_min(self) -> bool:
        return not self.stem and self.tail == 0

    @property
    def is_max(self) -> bool:
        return not self.stem and self.tail == self.base - 1

    @property
    def is_q_point(self) -> bool:
        """In the canonical countable dense set: eventually max-digit, not the top.

        These points are exactly the maxima of nontrivial lower clopen sets;
        ordered lexicographically they form a copy of the rationals.
        """
        return self.tail == self.base - 1 and bool(self.stem)

    def compare(self, other: "Point") -> int:
        if self.base != other.base:
            raise ValueError("cannot compare points of different bases")
        a, b = self.stem, other.stem
        la, lb = len(a), len(b)
        for i in range(max(la, lb)):
            da = a[i] if i < la else self.tail
            db = b[i] if i < lb else other.tail
            if da != db:
                return LT if da < db else GT
        if self.tail != other.tail:
            return LT if self.tail < other.tail else GT
        return EQ

    def first_difference(self, other: "Point") -> int | None:
        """Index of the first differing digit, or None when equal."""
        if self.base != other.base:
            raise ValueError("cannot compare points of different bases")
        a, b = self.stem, other.stem
        la, lb = len(a), len(b)
        for i in range(max(la, lb)):
            da = a[i] if i < la else self.tail
            db = b[i] if i < lb else other.tail
            if da != db:
                return i
        if self.tail != other.tail:
            return max(la, lb)
        return None

    def __lt__(self, other: "Point") -> bool:
        return self.compare(other) == LT

    def __le__(self, other: "Point") -> bool:
        return self.compare(other) != GT

    def __gt__(self, other: "Point") -> bool:
        return self.compare(other) == GT

    def __ge__(self, other: "Point") -> bool:
        return self.compare(other) != LT

    def as_fraction(self) -> Fraction:
        """Value of 0.d0 d1 d2 ... in base b.  Collapses the one ambiguous
        pair (w d (b-1)^w equals w (d+1) 0^w in value), so use it only for
        display, never for ordering."""
        v = Fraction(0)
        for i, d in enumerate(self.stem):
            v += Fraction(d, self.base ** (i + 1))
        # tail contributes tail/(b-1) * b^-len(stem)
        if self.tail:
            v += Fraction(self.tail, self.base - 1) * Fraction(1, self.base ** len(self.stem))
        return v

    def to_json(self) -> dict:
        return {"b": self.base, "stem": list(self.stem), "tail": self.tail}

    @classmethod
    def from_json(cls, obj: dict) -> "Point":
        try:
            return cls(int(obj["b"]), tuple(int(d) for d in obj["stem"]), int(obj["tail"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed point object: {obj!r}") from exc

    def __str__(self) -> str:
        stem = "".join(map(str, self.stem)) or "^"
        return f"{stem}({self.tail})w"

    def __repr__(self) -> str:
        return f"Point(b={self.base}, stem={''.join(map(str, self.stem))!r}, tail={self.tail})"


def load_point(obj: dict) -> tuple[Point, bool]:
    """Decode a point, reporting whether the input stem was already canonical."""
    p = Point.from_json(obj)
    was_canonical = list(p.stem) == [int(d) for d in obj["stem"]]
    return p, was_canonical


def lex_compare(x: Point, y: Point) -> int:
    return x.compare(y)


def min_point(base: int) -> Point:
    return Point(base, (), 0)


def max_point(base: int) -> Point:
    return Point(base, (), base - 1)


@dataclass(frozen=True, slots=True)
class Node:
    """A finite word s over {0, ..., base-1}; stands for the cylinder of all
    sequences extending s."""

    base: int
    word: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        _check_base(self.base)
        word = tuple(self.word)
        for d in word:
            _check_digit(d, self.base)
        object.__setattr__(self, "word", word)

    @property
    def depth(self) -> int:
        return len(self.word)

    def max_point(self) -> Point:
        return Point(self.base, self.word, self.base - 1)

    def min_point(self) -> Point:
        return Point(self.base, self.word, 0)

    def contains(self, x: Point) -> bool:
        return x.prefix(len(self.word)) == self.word

    def __str__(self) -> str:
        return "".join(map(str, self.word)) or "^"


def node_max(s: Node) -> Point:
    """Largest sequence extending s.  Distinct words can alias to the same
    point: appending max digits to s does not change the maximum."""
    return s.max_point()


def node_min(s: Node) -> Point:
    return s.min_point()


def interval_successor(x: Point) -> Point:
    """The immediate lexicographic successor of an eventually-max point.

    No sequence lies strictly between x = w d (b-1)^w and w (d+1) 0^w, which
    is what makes consecutive right-closed cells partition cleanly.
    """
    if x.tail != x.base - 1:
        raise ValueError(f"successor is defined for eventually-max points, got {x}")
    if x.is_max:
        raise ValueError("the top point has no successor")
    stem = x.stem
    return Point(x.base, stem[:-1] + (stem[-1] + 1,), 0)


def interval_predecessor(x: Point) -> Point:
    """Inverse of interval_successor, defined for eventually-zero points."""
    if x.tail != 0:
        raise ValueError(f"predecessor is defined for eventually-zero points, got {x}")
    if x.is_min:
        raise ValueError("the bottom point has no predecessor")
    stem = x.stem
    return Point(x.base, stem[:-1] + (stem[-1] - 1,), x.base - 1)


def encode_binary(x: Point) -> Point:
    """Order-preserving embedding of base-b points into base 2.

    Digit d maps to 1^d 0 for d <= b-2 and the top digit b-1 maps to 1^(b-1);
    this prefix code is strictly increasing digitwise, so lexicographic order
    is preserved.  Only boundary-form points (tail 0 or tail b-1) stay
    eventually constant under the encoding, and only those are accepted.
    """
    b = x.base
    if b == 2:
        return x
    if x.tail not in (0, b - 1):
        raise ValueError(
            f"tail {x.tail} encodes to a periodic, non-constant binary tail (base {b})"
        )
    out: list[int] = []
    for d in x.stem:
        if d == b - 1:
            out.extend([1] * (b - 1))
        else:
            out.extend([1] * d)
            out.append(0)
    return Point(2, tuple(out), 1 if x.tail == b - 1 else 0)


@dataclass(frozen=True, slots=True)
class Dyadic:
    """A distance token: zero or an exact power of two.  Never a float."""

    is_zero: bool
    exp: int = 0

    @classmethod
    def zero(cls) -> "Dyadic":
        return cls(True, 0)

    @classmethod
    def two_to(cls, exp: int) -> "Dyadic":
        return cls(False, exp)

    def as_fraction(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if self.exp >= 0:
            return Fraction(2**self.exp)
        return Fraction(1, 2**-self.exp)

    def _key(self) -> tuple:
        # zero sorts below every power of two
        return (0, 0) if self.is_zero else (1, self.exp)

    def __lt__(self, other: "Dyadic") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Dyadic") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "Dyadic") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "Dyadic") -> bool:
        return self._key() >= other._key()

    def __str__(self) -> str:
        return "0" if self.is_zero else f"2^{self.exp}"


def rho(x: Point, y: Point) -> Dyadic:
    """Standard ultrametric: 2^(-n0) with n0 the first differing index."""
    n0 = x.first_difference(y)
    return Dyadic.zero() if n0 is None else Dyadic.two_to(-n0)


def iter_points(base: int, max_stem: int, tails: tuple[int, ...] | None = None):
    """All canonical points with stem length <= max_stem and tail in `tails`,
    in (tail-block, stem length, lex) order.  Deterministic."""
    _check_base(base)
    if tails is None:
        tails = (0, base - 1)
    for tail in tails:
        yield Point(base, (), tail)
        for length in range(1, max_stem + 1):
            for head in product(range(base), repeat=length - 1):
                for last in range(base):
                    if last != tail:
                        yield Point(base, head + (last,), tail)


def word_rank(word: tuple[int, ...], base: int) -> int:
    """Position of a length-d word among all length-d words in lex order."""
    r = 0
    for d in word:
        r = r * base + d
    return r


def rank_word(rank: int, depth: int, base: int) -> tuple[int, ...]:
    out = []
    for _ in range(depth):
        rank, d = divmod(rank, base)
        out.append(d)
    return tuple(reversed(out))
