"""Coloring experiments over the surjection monoid.

Three strands share this module:

* resolution parameters and the fingerprint coloring: a resolution eps
  fixes a depth k, tuple width ell = b^k - 1, and color budget t_ell; every
  surjection is colored by the similarity type of its depth-k fingerprint;
* realization: for a fixed inner surjection h, every color is reachable by
  some outer factor f, found by scanning h's max-set for each type and
  pulling the witness tuple back through h;
* order-copies and the branch coloring: a finitely described copy of the
  rationals (max-set cut to finitely many clopen pieces) has a derived
  binary tree; comparing splitting depths of its extreme branches yields a
  number that a one-interval surgery can steer to any target.

Scatteredness questions are decided only for these finitely described
copies, via the contains-a-full-cell criterion; all yes answers carry a
cell as certificate, and the bounded no answers record their search bound.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .caps import default_depth_cap
from .intervals import ClopenInterval
from .points import Node, Point, interval_successor, max_point, min_point, rank_word
from .randgen import increasing_q_points, random_filtering, random_surjection
from .similarity import (
    DEFAULT_SCAN_BUDGET,
    canonical_coloring,
    scan_types,
    tangent_number,
)
from .surjections import (
    BoundaryTuple,
    ChainSurjection,
    FilteringSurjection,
    Surjection,
    compose,
    from_filtering,
    identity,
    surjection_from_json,
    tuple_to_factor,
    tuple_to_surjection,
)

__all__ = [
    "EpsilonParameters",
    "epsilon_parameters",
    "lower_bound_coloring",
    "ColorRealization",
    "ExperimentReport",
    "realize_all_colors",
    "QCopy",
    "find_cell_within",
    "TreeNodeReport",
    "PerfectTreeReport",
    "perfect_tree",
    "omega_coloring",
    "WitnessOutcome",
    "build_witness",
    "ColoringSpec",
    "OscillationWitness",
    "OscillationReport",
    "oscillation_search",
    "random_qcopy",
    "CELL_SEARCH_SLACK",
]

# extra levels granted to the cell search beyond the structural depth of the
# inputs; generous because a miss only costs time while the yes answers all
# carry certificates
CELL_SEARCH_SLACK = 12


# -- resolution parameters and the fingerprint coloring -------------------


@dataclass(frozen=True, slots=True)
class EpsilonParameters:
    k: int  # fingerprint depth resolving the metric to below eps
    ell: int  # tuple width b^k - 1
    t: int  # color budget: tangent_number(ell)


def epsilon_parameters(base: int, eps) -> EpsilonParameters:
    """Depth, width, and color budget at resolution eps, exactly.

    k is the least depth with 2^{-k} < eps, i.e. floor(log2(1/eps)) + 1,
    computed by exact rational comparison.
    """
    if base < 2:
        raise ValueError(f"need base >= 2, got {base}")
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"resolution must lie in (0, 1], got {eps}")
    j = 0
    while eps <= Fraction(1, 2 ** (j + 1)):
        j += 1
    k = j + 1
    ell = base**k - 1
    return EpsilonParameters(k, ell, tangent_number(ell))


def lower_bound_coloring(f: Surjection, k: int) -> int:
    """Similarity-type color of f's depth-k fingerprint: surjections with
    equal fingerprints (distance below 2^{-(k-1)}) always agree."""
    return canonical_coloring(f.fingerprint(k), f.base**k - 1)


# -- realization of every color over a fixed inner surjection -------------


@dataclass(frozen=True, slots=True)
class ColorRealization:
    color: int
    witness: tuple[Point, ...] | None
    depth: int | None  # max-set depth the witness was found at
    verified: bool

    def to_json(self) -> dict:
        return {
            "color": self.color,
            "witness": None if self.witness is None else [p.to_json() for p in self.witness],
            "depth": self.depth,
            "verified": self.verified,
        }


@dataclass(frozen=True, slots=True)
class ExperimentReport:
    base: int
    k: int
    ell: int
    colors: int
    realizations: tuple[ColorRealization, ...]
    combos: int
    deepest_full: int
    depth_cap: int
    complete: bool

    def to_json(self) -> dict:
        return {
            "b": self.base,
            "k": self.k,
            "l": self.ell,
            "t": self.colors,
            "realizations": [r.to_json() for r in self.realizations],
            "combos": self.combos,
            "deepest_full_depth": self.deepest_full,
            "depth_cap": self.depth_cap,
            "complete": self.complete,
        }


def realize_all_colors(
    h: Surjection,
    k: int,
    depth_cap: int | None = None,
    budget: int = DEFAULT_SCAN_BUDGET,
) -> ExperimentReport:
    """Find, for every color r, an outer factor f with the composite f o h
    colored r, and verify each hit twice: the composed fingerprint really
    gets color r, and so does the canonical surjection rebuilt from that
    fingerprint alone (the whole metric ball shares the color).

    Colors whose type never shows up within the cap are reported missing,
    not raised."""
    if depth_cap is None:
        depth_cap = default_depth_cap()
    ell = h.base**k - 1
    t = tangent_number(ell)
    outcome = scan_types(h, ell, depth_cap, budget)
    rows = []
    for r in range(t):
        w = outcome.witnesses.get(r)
        if w is None:
            rows.append(ColorRealization(r, None, None, False))
            continue
        f = tuple_to_factor(h, BoundaryTuple(h.base, k, w.points))
        composite = compose(f, h)
        got = lower_bound_coloring(composite, k)
        ball_rep = tuple_to_surjection(k, BoundaryTuple(h.base, k, composite.fingerprint(k)))
        got_ball = lower_bound_coloring(ball_rep, k)
        if got != r or got_ball != r:
            raise RuntimeError(
                f"realization of color {r} failed verification: composite {got}, ball {got_ball}"
            )
        rows.append(ColorRealization(r, w.points, w.depth, True))
    return ExperimentReport(
        h.base, k, ell, t, tuple(rows), outcome.combos, outcome.deepest_full,
        depth_cap, outcome.complete,
    )


# -- finitely described copies of the rationals ----------------------------


def _support_hint(h: Surjection) -> int:
    if isinstance(h, FilteringSurjection):
        return h.filtering.support
    if isinstance(h, ChainSurjection):
        return _support_hint(h.outer) + _support_hint(h.inner)
    return 0


def _stem_hint(h: Surjection) -> int:
    if isinstance(h, FilteringSurjection):
        return max(
            (len(p.stem) for level in h.filtering.levels for p in level),
            default=0,
        )
    if isinstance(h, ChainSurjection):
        return _stem_hint(h.outer) + _stem_hint(h.inner)
    return 0


def _cell_bound(h: Surjection, interval: ClopenInterval) -> int:
    ends = max(len(interval.lo.stem), len(interval.hi.stem))
    return _support_hint(h) + _stem_hint(h) + ends + CELL_SEARCH_SLACK


def find_cell_within(
    h: Surjection, interval: ClopenInterval, depth_bound: int | None = None
) -> tuple[int, ...] | None:
    """Word of some cell of h contained in the interval, or None if the
    bounded search finds none.

    Walks the two endpoint cell chains in lockstep; a containment appears
    exactly when the interval's ends go flush with cell ends or a whole
    cell opens up strictly between the chains.
    """
    if h.base != interval.base:
        raise ValueError("base mismatch")
    if depth_bound is None:
        depth_bound = _cell_bound(h, interval)
    b = h.base
    lo, hi = interval.lo, interval.hi
    wl: tuple[int, ...] = ()
    wh: tuple[int, ...] = ()
    alo, ahi = min_point(b), max_point(b)  # cell of the lo chain
    blo, bhi = alo, ahi  # cell of the hi chain
    rl = rh = 0
    if alo == lo and ahi == hi:
        return ()
    for d in range(1, depth_bound + 1):
        slo = h.child_maxima(wl)
        i = bisect_left(slo, lo)
        wl = wl + (i,)
        rl = rl * b + i
        alo = alo if i == 0 else interval_successor(slo[i - 1])
        ahi = slo[i] if i < b - 1 else ahi
        shi = h.child_maxima(wh)
        j = bisect_left(shi, hi)
        wh = wh + (j,)
        rh = rh * b + j
        blo = blo if j == 0 else interval_successor(shi[j - 1])
        bhi = shi[j] if j < b - 1 else bhi
        if wl == wh:
            if alo == lo and ahi == hi:
                return wl
            continue
        if alo == lo:
            return wl
        if bhi == hi:
            return wh
        if rh - rl >= 2:
            return rank_word(rl + 1, d, b)
    return None


class QCopy:
    """A copy of the rationals cut from a max-set: the base-2 surjection's
    cell maxima restricted to finitely many clopen pieces.

    Pieces are normalized (sorted, overlapping or abutting ones merged) and
    each surviving piece must contain a full cell of the surjection, which
    keeps the point set dense in itself everywhere it lives."""

    __slots__ = ("surjection", "pieces")

    def __init__(self, surjection: Surjection, pieces: tuple[ClopenInterval, ...]):
        if surjection.base != 2:
            raise ValueError("copies are base-2 only; encode wider bases first")
        pieces = tuple(pieces)
        if not pieces:
            raise ValueError("restriction list must be nonempty")
        merged = _merge_pieces(pieces)
        for p in merged:
            if find_cell_within(surjection, p) is None:
                raise ValueError(f"restriction {p} contains no full cell within the search bound")
        self.surjection = surjection
        self.pieces = merged

    @classmethod
    def unrestricted(cls, surjection: Surjection) -> "QCopy":
        return cls(surjection, (ClopenInterval.whole(2),))

    def to_json(self) -> dict:
        return {
            "surjection": self.surjection.to_json(),
            "restrictions": [p.to_json() for p in self.pieces],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QCopy":
        return cls(
            surjection_from_json(obj["surjection"]),
            tuple(ClopenInterval.from_json(p) for p in obj["restrictions"]),
        )

    def __repr__(self) -> str:
        return f"QCopy({self.surjection!r}, {len(self.pieces)} pieces)"


def _merge_pieces(pieces: tuple[ClopenInterval, ...]) -> tuple[ClopenInterval, ...]:
    todo = sorted(pieces, key=lambda p: (p.lo, p.hi))
    out = [todo[0]]
    for nxt in todo[1:]:
        cur = out[-1]
        if cur.hi.is_max or nxt.lo <= interval_successor(cur.hi):
            if cur.hi < nxt.hi:
                out[-1] = ClopenInterval(cur.lo, nxt.hi)
        else:
            out.append(nxt)
    return tuple(out)


def _node_in_tree(y: QCopy, word: tuple[int, ...]) -> bool:
    # the derived tree keeps a node when the copy is non-scattered inside
    # its cylinder: witnessed by a full cell inside cylinder-cap-piece
    cyl = ClopenInterval.of_node(Node(2, word))
    for piece in y.pieces:
        j = cyl.intersect(piece)
        if j is not None and find_cell_within(y.surjection, j) is not None:
            return True
    return False


@dataclass(frozen=True, slots=True)
class TreeNodeReport:
    word: tuple[int, ...]
    splitting: bool | None  # None at the frontier, where children went untested
    pending: bool  # no splitting node at or below this one materialized yet

    def to_json(self) -> dict:
        return {"word": list(self.word), "splitting": self.splitting, "pending": self.pending}


@dataclass(frozen=True, slots=True)
class PerfectTreeReport:
    depth: int
    nodes: tuple[TreeNodeReport, ...]

    def words(self) -> tuple[tuple[int, ...], ...]:
        return tuple(n.word for n in self.nodes)

    def to_json(self) -> dict:
        return {"depth": self.depth, "nodes": [n.to_json() for n in self.nodes]}


def perfect_tree(y: QCopy, depth: int) -> PerfectTreeReport:
    """The derived tree of the copy, materialized to `depth`: prefix-closed
    by construction, with each node marked splitting (both children kept)
    or pending (no splitting node found at or below it yet)."""
    levels: list[list[tuple[int, ...]]] = [[()]]
    for d in range(depth):
        nxt = []
        for w in levels[d]:
            for c in (0, 1):
                if _node_in_tree(y, w + (c,)):
                    nxt.append(w + (c,))
        levels.append(nxt)
    present = {w for lvl in levels for w in lvl}
    splitting: dict[tuple[int, ...], bool | None] = {}
    for lvl in levels[:-1]:
        for w in lvl:
            splitting[w] = (w + (0,) in present) and (w + (1,) in present)
    for w in levels[-1]:
        splitting[w] = None
    settled: dict[tuple[int, ...], bool] = {}
    for d in range(depth, -1, -1):
        for w in levels[d]:
            below = any(settled.get(w + (c,), False) for c in (0, 1))
            settled[w] = bool(splitting[w]) or below
    nodes = tuple(
        TreeNodeReport(w, splitting[w], not settled[w])
        for lvl in levels
        for w in lvl
    )
    return PerfectTreeReport(depth, nodes)


def _branch_splits(y: QCopy, prefer: int, cap: int):
    """Splitting nodes along the extreme branch of the derived tree,
    preferring child `prefer` (1 walks the maximum branch, 0 the minimum)."""
    word: tuple[int, ...] = ()
    for _ in range(cap + 1):
        pref, other = word + (prefer,), word + (1 - prefer,)
        in_pref = _node_in_tree(y, pref)
        in_other = _node_in_tree(y, other)
        if in_pref and in_other:
            yield word
        if in_pref:
            word = pref
        elif in_other:
            word = other
        else:
            raise RuntimeError(f"derived tree has no child below {word}; copy data invalid")


def omega_coloring(y: QCopy, cap: int | None = None) -> int:
    """Branch-comparison color of the copy: one less than the number of
    maximum-branch splitting nodes shorter than the second minimum-branch
    splitting node.  Nonnegative, since the branches share their first
    splitting node."""
    if cap is None:
        cap = default_depth_cap()
    min_splits = _branch_splits(y, 0, cap)
    t0 = next(min_splits, None)
    t1 = next(min_splits, None)
    if t1 is None:
        raise RuntimeError("fewer than two splitting nodes on the minimum branch within cap")
    t1_len = len(t1)
    count = 0
    for s in _branch_splits(y, 1, cap):
        if len(s) >= t1_len:
            return count - 1
        count += 1
    raise RuntimeError("maximum-branch splitting nodes exhausted within cap")


@dataclass(frozen=True, slots=True)
class WitnessOutcome:
    copy: QCopy
    target: int
    cut_node: tuple[int, ...]  # t-side node; everything above its cylinder max goes
    keep_node: tuple[int, ...]  # s-side node; everything below its cylinder min goes
    color: int  # re-verified on the returned copy

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "cut_node": list(self.cut_node),
            "keep_node": list(self.keep_node),
            "color": self.color,
            "copy": self.copy.to_json(),
        }


def build_witness(y: QCopy, r: int, cap: int | None = None) -> WitnessOutcome:
    """Cut one open interval out of the copy so the branch color becomes r.

    Walk the minimum branch to the first splitting node deep enough that at
    least r+1 maximum-branch splitting nodes are shorter; drop everything
    strictly between that node's cylinder max and a matching maximum-branch
    node's cylinder min.  The returned copy re-verifies to color r."""
    if r < 0:
        raise ValueError(f"target must be nonnegative, got {r}")
    if cap is None:
        cap = default_depth_cap()
    s_gen = _branch_splits(y, 1, cap)
    s_splits: list[tuple[int, ...]] = []

    def s_below(length: int) -> int:
        # of splitting nodes shorter than length, keeping one spare beyond
        while not s_splits or len(s_splits[-1]) < length:
            nxt = next(s_gen, None)
            if nxt is None:
                raise RuntimeError("maximum-branch splitting nodes exhausted within cap")
            s_splits.append(nxt)
        return sum(1 for s in s_splits if len(s) < length)

    t0 = s0 = None
    for n, t in enumerate(_branch_splits(y, 0, cap)):
        if n == 0:
            continue
        m = s_below(len(t)) - 1
        if m >= r:
            t0 = t
            s0 = s_splits[m - r + 1]
            break
    if t0 is None or s0 is None:
        raise RuntimeError(f"no minimum-branch splitting node deep enough for target {r} within cap")
    keep_low = ClopenInterval(min_point(2), Point(2, t0, 1))
    keep_high = ClopenInterval(Point(2, s0, 0), max_point(2))
    pieces = []
    for piece in y.pieces:
        for keep in (keep_low, keep_high):
            cut = piece.intersect(keep)
            if cut is not None:
                pieces.append(cut)
    z = QCopy(y.surjection, tuple(pieces))
    color = omega_coloring(z, cap)
    if color != r:
        raise RuntimeError(f"witness verification failed: built color {color}, wanted {r}")
    return WitnessOutcome(z, r, t0, s0, color)


# -- colorings with arbitrary labels and the oscillation search ------------


def _fingerprint_key(fp: tuple[Point, ...]) -> str:
    return "|".join("".join(map(str, p.stem)) for p in fp)


@dataclass(frozen=True, slots=True)
class ColoringSpec:
    """A coloring of surjections that factors through depth-k fingerprints.

    kinds: "relabeled_types" wires each similarity type to a label;
    "table" maps serialized fingerprints to labels with a default for
    misses; "constant" ignores its input.  Only the first and last factor
    through types, which is what the exact search regime requires."""

    base: int
    depth: int
    colors: int
    kind: str
    relabel: tuple[int, ...] = ()
    table: tuple[tuple[str, int], ...] = ()
    constant: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("relabeled_types", "table", "constant"):
            raise ValueError(f"unknown coloring kind {self.kind!r}")
        if self.colors < 1:
            raise ValueError("need at least one color")
        if self.kind == "relabeled_types":
            want = tangent_number(self.ell)
            if len(self.relabel) != want:
                raise ValueError(f"relabel table needs {want} entries, got {len(self.relabel)}")
            bad = [c for c in self.relabel if not 0 <= c < self.colors]
        elif self.kind == "table":
            bad = [c for _, c in self.table if not 0 <= c < self.colors]
            bad += [] if 0 <= self.constant < self.colors else [self.constant]
        else:
            bad = [] if 0 <= self.constant < self.colors else [self.constant]
        if bad:
            raise ValueError(f"labels out of range: {bad[:4]}")

    @property
    def ell(self) -> int:
        return self.base**self.depth - 1

    def factors_through_types(self) -> bool:
        return self.kind in ("relabeled_types", "constant")

    def color_of(self, fp: tuple[Point, ...]) -> int:
        if self.kind == "constant":
            return self.constant
        if self.kind == "relabeled_types":
            return self.relabel[canonical_coloring(fp, self.ell)]
        return dict(self.table).get(_fingerprint_key(fp), self.constant)

    def to_json(self) -> dict:
        out = {"b": self.base, "k": self.depth, "colors": self.colors, "kind": self.kind}
        if self.kind == "relabeled_types":
            out["relabel"] = list(self.relabel)
        elif self.kind == "table":
            out["table"] = {k: v for k, v in self.table}
            out["default"] = self.constant
        else:
            out["value"] = self.constant
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ColoringSpec":
        kind = obj["kind"]
        return cls(
            base=int(obj["b"]),
            depth=int(obj["k"]),
            colors=int(obj["colors"]),
            kind=kind,
            relabel=tuple(int(x) for x in obj.get("relabel", ())),
            table=tuple(sorted((str(k), int(v)) for k, v in obj.get("table", {}).items())),
            constant=int(obj.get("value", obj.get("default", 0))),
        )


@dataclass(frozen=True, slots=True)
class OscillationWitness:
    label: int
    type_index: int | None
    points: tuple[Point, ...]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "type": self.type_index,
            "points": [p.to_json() for p in self.points],
        }


@dataclass(frozen=True, slots=True)
class OscillationReport:
    regime: str  # "exact" | "heuristic"
    base: int
    k: int
    ell: int
    labels: tuple[int, ...]  # the achieved color set B, sorted
    witnesses: tuple[OscillationWitness, ...]
    guaranteed: bool  # True when |B| <= t_ell is forced by factoring through types
    candidates_tried: int
    budget: int

    def to_json(self) -> dict:
        return {
            "regime": self.regime,
            "b": self.base,
            "k": self.k,
            "l": self.ell,
            "labels": list(self.labels),
            "witnesses": [w.to_json() for w in self.witnesses],
            "guaranteed": self.guaranteed,
            "candidates_tried": self.candidates_tried,
            "budget": self.budget,
        }


def oscillation_search(
    spec: ColoringSpec,
    eps,
    budget: int = DEFAULT_SCAN_BUDGET,
    seed: int | str = 0,
    depth_cap: int | None = None,
) -> OscillationReport:
    """Shrink the coloring's range on a cube of composites.

    Exact regime (spec factors through similarity types): the identity cube
    already achieves exactly the relabeled type set, so sweep one witness
    tuple per type and report B with the t_ell guarantee.  Heuristic regime
    (arbitrary tables): try seeded candidate inner surjections, scan each
    cube's reachable fingerprints within budget, and report the smallest
    achieved label set with no guarantee attached."""
    params = epsilon_parameters(spec.base, eps)
    if params.k != spec.depth:
        raise ValueError(
            f"coloring reads depth {spec.depth} but resolution {eps} needs depth {params.k}"
        )
    if depth_cap is None:
        depth_cap = default_depth_cap()
    k, ell = params.k, params.ell
    if spec.factors_through_types():
        h = identity(spec.base)
        if spec.kind == "constant":
            fp = h.fingerprint(k)
            wit = OscillationWitness(spec.constant, canonical_coloring(fp, ell), fp)
            return OscillationReport(
                "exact", spec.base, k, ell, (spec.constant,), (wit,), True, 1, budget
            )
        outcome = scan_types(h, ell, depth_cap, budget)
        labels: dict[int, OscillationWitness] = {}
        for r in sorted(outcome.witnesses):
            w = outcome.witnesses[r]
            f = tuple_to_factor(h, BoundaryTuple(spec.base, k, w.points))
            fp = compose(f, h).fingerprint(k)
            label = spec.color_of(fp)
            if label not in labels:
                labels[label] = OscillationWitness(label, r, w.points)
        if not outcome.complete:
            raise RuntimeError("type sweep incomplete within cap; cannot certify the bound")
        return OscillationReport(
            "exact", spec.base, k, ell, tuple(sorted(labels)),
            tuple(labels[c] for c in sorted(labels)), True, 1, budget,
        )
    rng = random.Random(f"{seed}/oscillation")
    n_candidates = max(1, min(8, budget // 40_000))
    per_budget = max(1_000, budget // n_candidates)
    best: tuple[int, int, dict[int, OscillationWitness]] | None = None
    for c_idx in range(n_candidates):
        h = identity(spec.base) if c_idx == 0 else random_surjection(rng, spec.base, 3)
        achieved: dict[int, OscillationWitness] = {}
        spent = 0
        for d in range(1, depth_cap + 1):
            pts = h.max_set(d)
            n = len(pts)
            if n < ell:
                continue
            cost = comb(n, ell)
            if spent + cost > per_budget:
                break
            spent += cost
            for picked in combinations(range(n), ell):
                fp = tuple(pts[i] for i in picked)
                label = spec.color_of(fp)
                if label not in achieved:
                    achieved[label] = OscillationWitness(label, None, fp)
        if best is None or len(achieved) < best[0]:
            best = (len(achieved), c_idx, achieved)
    assert best is not None
    _, _, achieved = best
    return OscillationReport(
        "heuristic", spec.base, k, ell, tuple(sorted(achieved)),
        tuple(achieved[c] for c in sorted(achieved)), False, n_candidates, budget,
    )


# -- seeded copies for the suites ------------------------------------------


def random_qcopy(
    rng: random.Random, max_support: int = 3, max_pieces: int = 3
) -> QCopy:
    """A random finitely described copy: random filtering, one to
    max_pieces disjoint clopen pieces with a genuine gap between any two."""
    h = from_filtering(random_filtering(rng, 2, rng.randint(0, max_support)))
    n = rng.randint(1, max_pieces)
    cuts = increasing_q_points(rng, min_point(2), max_point(2), 2 * n)
    pieces = []
    for i in range(n):
        lo = min_point(2) if i == 0 and rng.random() < 0.5 else interval_successor(cuts[2 * i])
        hi = max_point(2) if i == n - 1 and rng.random() < 0.5 else cuts[2 * i + 1]
        pieces.append(ClopenInterval(lo, hi))
    return QCopy(h, tuple(pieces))
