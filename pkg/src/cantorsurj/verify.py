"""Seeded verification suite behind the `verify` verb.

Nine deterministic checks cover the package's correctness story end to
end: the enumeration oracles, the filtering bijection, monoid and metric
laws, factorization, color realization, branch-coloring surgery, and the
oscillation bound.  Reports carry counts and counterexample dumps only,
never wall times, so equal seeds give byte-identical output; each check
draws from its own child stream, so adding draws to one check never
shifts another's data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .experiments import (
    ColoringSpec,
    QCopy,
    build_witness,
    oscillation_search,
    random_qcopy,
    realize_all_colors,
)
from .intervals import Filtering
from .points import iter_points
from .randgen import derive_rng, random_filtering, random_surjection
from .similarity import enumerate_types, tangent_number
from .surjections import (
    BoundaryTuple,
    compose,
    distance,
    factor_through,
    from_filtering,
    identity,
    surjection_from_json,
    to_filtering,
    tuple_to_factor,
)

__all__ = ["CheckResult", "SuiteReport", "run_suite", "replay", "CHECK_NAMES"]

MAX_DUMPS = 5  # per check; the detail line always carries the full count

TANGENT_FIRST_FIVE = (1, 2, 16, 272, 7936)


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True, slots=True)
class CheckResult:
    index: int
    name: str
    passed: bool
    detail: str
    failures: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "failures": [json.loads(f) for f in self.failures],
        }


@dataclass(frozen=True, slots=True)
class SuiteReport:
    seed: str
    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": [r.to_json() for r in self.results],
        }

    def render(self) -> str:
        lines = [f"cantorsurj verify seed={self.seed}"]
        for r in self.results:
            status = "ok  " if r.passed else "FAIL"
            lines.append(f"{status} {r.index} {r.name:<22} {r.detail}")
            for f in r.failures:
                lines.append(f"       {f}")
        npass = sum(1 for r in self.results if r.passed)
        lines.append(f"{npass}/{len(self.results)} passed, seed={self.seed}")
        return "\n".join(lines) + "\n"


# -- oracles for check 1 ----------------------------------------------------


def taylor_tangent(k_max: int) -> tuple[int, ...]:
    """Odd derivatives of tan at 0 from exact series division tan*cos = sin."""
    order = 2 * k_max
    fact = [1]
    for i in range(1, order + 1):
        fact.append(fact[-1] * i)
    sin = [Fraction((-1) ** (n // 2), fact[n]) if n % 2 else Fraction(0) for n in range(order + 1)]
    cos = [Fraction(0) if n % 2 else Fraction((-1) ** (n // 2), fact[n]) for n in range(order + 1)]
    tan = [Fraction(0)] * (order + 1)
    for n in range(order + 1):
        tan[n] = sin[n] - sum(tan[i] * cos[n - i] for i in range(n))
    out = []
    for k in range(1, k_max + 1):
        v = tan[2 * k - 1] * fact[2 * k - 1]
        if v.denominator != 1:
            raise ArithmeticError(f"non-integral derivative at k={k}: {v}")
        out.append(v.numerator)
    return tuple(out)


def count_updown(n: int) -> int:
    """Brute count of up-down permutations of n elements."""
    if n == 0:
        return 1
    return sum(
        1
        for p in permutations(range(n))
        if all(p[i] < p[i + 1] if i % 2 == 0 else p[i] > p[i + 1] for i in range(n - 1))
    )


# -- the nine checks --------------------------------------------------------


def _check_tangent(rng) -> tuple[bool, str, list[dict]]:
    table = tuple(tangent_number(k) for k in range(1, 6))
    taylor = taylor_tangent(5)
    brute = tuple(count_updown(2 * k - 1) for k in range(1, 6))
    ok = table == TANGENT_FIRST_FIVE == taylor == brute
    detail = f"zigzag(1..5)={table}; taylor={taylor}; brute={brute}"
    bad = [] if ok else [{"criterion": 1, "zigzag": table, "taylor": taylor, "brute": brute}]
    return ok, detail, bad


def _check_type_counts(rng) -> tuple[bool, str, list[dict]]:
    counts = tuple(len(enumerate_types(l)) for l in range(1, 5))
    want = tuple(tangent_number(l) for l in range(1, 5))
    ok = counts == want
    detail = f"|types(l)| for l=1..4 = {counts}, want {want}"
    bad = [] if ok else [{"criterion": 2, "counts": counts, "want": want}]
    return ok, detail, bad


def _check_roundtrip(rng) -> tuple[bool, str, list[dict]]:
    bad = []
    for _ in range(1000):
        b = rng.choice((2, 3))
        filt = random_filtering(rng, b, rng.randint(0, 4))
        f = from_filtering(filt)
        for d in range(1, 7):
            got = to_filtering(f, d)
            want = Filtering(b, filt.levels[:d]) if d < filt.support else filt.extend(d)
            if got != want:
                bad.append({"criterion": 3, "filtering": filt.to_json(), "depth": d})
                break
    detail = f"1000 filterings (b in 2,3, support <= 4) x depths 1..6: {len(bad)} failures"
    return not bad, detail, bad


def _check_monoid(rng) -> tuple[bool, str, list[dict]]:
    bad = []
    e = identity(2)
    for _ in range(200):
        f = random_surjection(rng, 2, 3, 0.2)
        g = random_surjection(rng, 2, 3, 0.2)
        h = random_surjection(rng, 2, 3, 0.2)
        lhs = compose(compose(f, g), h).fingerprint(8)
        rhs = compose(f, compose(g, h)).fingerprint(8)
        base_fp = g.fingerprint(8)
        left = compose(e, g).fingerprint(8)
        right = compose(g, e).fingerprint(8)
        if not (lhs == rhs and left == base_fp and right == base_fp):
            bad.append(
                {
                    "criterion": 4,
                    "f": f.to_json(),
                    "g": g.to_json(),
                    "h": h.to_json(),
                    "assoc": lhs == rhs,
                    "left_id": left == base_fp,
                    "right_id": right == base_fp,
                }
            )
    detail = f"200 triples, depth-8 fingerprints, associativity + identity laws: {len(bad)} failures"
    return not bad, detail, bad


SAMPLE_STEM_LIMIT = 10
SAMPLE_DIGITS = 10  # first image disagreement sits at depth <= max support < 10


def _sampled_sup_exponent(table_f, table_g) -> int | None:
    """Index of the earliest image-digit disagreement over the sample, or
    None when every sampled image agrees; sup rho = 2^-index."""
    best = None
    for u, v in zip(table_f, table_g):
        if u != v:
            idx = next(i for i, (x, y) in enumerate(zip(u, v)) if x != y)
            if best is None or idx < best:
                best = idx
                if best == 0:
                    break
    return best


def _check_metric(rng) -> tuple[bool, str, list[dict]]:
    samples = tuple(iter_points(2, SAMPLE_STEM_LIMIT))
    pool = [random_surjection(rng, 2, 4, 0.3) for _ in range(40)]
    tables = [tuple(s.evaluate(x, SAMPLE_DIGITS).digits for x in samples) for s in pool]
    bad = []
    zeros = 0
    for _ in range(500):
        i, j = rng.randrange(40), rng.randrange(40)
        d = distance(pool[i], pool[j])
        m = _sampled_sup_exponent(tables[i], tables[j])
        if d.kind == "zero":
            zeros += 1
            ok = m is None
        else:
            ok = m == d.agree_depth
        if not ok:
            bad.append(
                {
                    "criterion": 5,
                    "f": pool[i].to_json(),
                    "g": pool[j].to_json(),
                    "distance": str(d),
                    "sampled_exponent": m,
                }
            )
    detail = (
        f"500 pairs vs sup-oracle over {len(samples)} points (stems <= {SAMPLE_STEM_LIMIT}): "
        f"{len(bad)} mismatches, {zeros} zero-distance pairs"
    )
    return not bad, detail, bad


def _check_factorization(rng) -> tuple[bool, str, list[dict]]:
    bad = []
    for i in range(200):
        b = 3 if i % 7 == 0 else 2
        f = random_surjection(rng, b, 3, 0.25 if b == 2 else 0.0)
        h = random_surjection(rng, b, 3, 0.25 if b == 2 else 0.0)
        g = compose(f, h)
        ff = factor_through(g, h, 6)
        ok1 = ff.fingerprint(6) == f.fingerprint(6) and ff.fingerprint(3) == f.fingerprint(3)
        t = BoundaryTuple(b, 6, g.fingerprint(6))
        f2 = tuple_to_factor(h, t)
        ok2 = compose(f2, h).fingerprint(6) == t.entries
        if not (ok1 and ok2):
            bad.append(
                {
                    "criterion": 6,
                    "f": f.to_json(),
                    "h": h.to_json(),
                    "factor_ok": ok1,
                    "tuple_ok": ok2,
                }
            )
    detail = f"200 pairs, factor + tuple roundtrips at depth 6: {len(bad)} failures"
    return not bad, detail, bad


def _check_realization(rng) -> tuple[bool, str, list[dict]]:
    bad = []
    inners = [identity(2)] + [
        from_filtering(random_filtering(rng, 2, rng.randint(0, 3))) for _ in range(20)
    ]
    combos = 0
    deepest = 0
    for h in inners:
        rep = realize_all_colors(h, 2, 20)
        combos += rep.combos
        deepest = max(deepest, rep.deepest_full)
        if not (rep.complete and all(r.verified for r in rep.realizations)):
            missing = [r.color for r in rep.realizations if not r.verified]
            bad.append({"criterion": 7, "h": h.to_json(), "missing": missing})
    detail = (
        f"21 inner surjections, 16 colors each, cap 20: {len(bad)} incomplete"
        f" (combos={combos}, deepest={deepest})"
    )
    return not bad, detail, bad


def _check_omega(rng) -> tuple[bool, str, list[dict]]:
    bad = []
    copies = [QCopy.unrestricted(identity(2))] + [random_qcopy(rng) for _ in range(50)]
    done = 0
    for y in copies:
        for r in range(9):
            try:
                out = build_witness(y, r)
                if out.color != r:
                    raise RuntimeError(f"color {out.color}")
                done += 1
            except (RuntimeError, ValueError) as exc:
                bad.append(
                    {"criterion": 8, "copy": y.to_json(), "target": r, "error": str(exc)}
                )
    detail = f"{len(copies)} copies x targets 0..8: {done} witnesses verified, {len(bad)} failures"
    return not bad, detail, bad


def _check_oscillation(rng) -> tuple[bool, str, list[dict]]:
    eps = Fraction(3, 10)
    specs = [
        ColoringSpec(2, 2, 16, "relabeled_types", relabel=tuple(range(16))),
        ColoringSpec(2, 2, 64, "constant", constant=63),
    ]
    for _ in range(30):
        k_colors = rng.randint(1, 64)
        specs.append(
            ColoringSpec(
                2, 2, k_colors, "relabeled_types",
                relabel=tuple(rng.randrange(k_colors) for _ in range(16)),
            )
        )
    bad = []
    witnesses = 0
    e = identity(2)
    for spec in specs:
        rep = oscillation_search(spec, eps)
        ok = rep.regime == "exact" and rep.guaranteed and len(rep.labels) <= 16
        if spec.kind == "relabeled_types":
            ok = ok and set(rep.labels) == set(spec.relabel)
        for w in rep.witnesses:
            f = tuple_to_factor(e, BoundaryTuple(2, 2, w.points))
            fp = compose(f, e).fingerprint(2)
            ok = ok and spec.color_of(fp) == w.label
            witnesses += 1
        if not ok:
            bad.append({"criterion": 9, "spec": spec.to_json(), "labels": list(rep.labels)})
    detail = (
        f"{len(specs)} colorings (K <= 64) through the type map: all |B| <= 16, "
        f"{witnesses} near-cube witnesses re-verified, {len(bad)} failures"
    )
    return not bad, detail, bad


CHECKS = (
    (1, "tangent-oracles", _check_tangent),
    (2, "type-counts", _check_type_counts),
    (3, "bijection-roundtrip", _check_roundtrip),
    (4, "monoid-laws", _check_monoid),
    (5, "metric-criterion", _check_metric),
    (6, "factorization", _check_factorization),
    (7, "color-realization", _check_realization),
    (8, "omega-witnesses", _check_omega),
    (9, "oscillation-exact", _check_oscillation),
)

CHECK_NAMES = {idx: name for idx, name, _ in CHECKS}


def run_suite(seed: int | str, only: set[int] | None = None) -> SuiteReport:
    results = []
    for idx, name, fn in CHECKS:
        if only is not None and idx not in only:
            continue
        rng = derive_rng(seed, f"c{idx}")
        try:
            ok, detail, bad = fn(rng)
        except Exception as exc:  # a crashed check is a failed check
            ok, detail, bad = False, f"crashed: {type(exc).__name__}: {exc}", []
        results.append(
            CheckResult(idx, name, ok, detail, tuple(_dump(d) for d in bad[:MAX_DUMPS]))
        )
    return SuiteReport(str(seed), tuple(results))


# -- counterexample replay ---------------------------------------------------


def replay(dump: dict) -> bool:
    """Re-run the one assertion behind a counterexample dump.  Returns True
    when the assertion passes now, so any genuine dump replays to False."""
    c = dump["criterion"]
    if c == 1:
        return (
            tuple(tangent_number(k) for k in range(1, 6))
            == TANGENT_FIRST_FIVE
            == taylor_tangent(5)
            == tuple(count_updown(2 * k - 1) for k in range(1, 6))
        )
    if c == 2:
        return tuple(len(enumerate_types(l)) for l in range(1, 5)) == tuple(
            tangent_number(l) for l in range(1, 5)
        )
    if c == 3:
        filt = Filtering.from_json(dump["filtering"])
        d = dump["depth"]
        want = Filtering(filt.base, filt.levels[:d]) if d < filt.support else filt.extend(d)
        return to_filtering(from_filtering(filt), d) == want
    if c == 4:
        f = surjection_from_json(dump["f"])
        g = surjection_from_json(dump["g"])
        h = surjection_from_json(dump["h"])
        e = identity(f.base)
        base_fp = g.fingerprint(8)
        return (
            compose(compose(f, g), h).fingerprint(8) == compose(f, compose(g, h)).fingerprint(8)
            and compose(e, g).fingerprint(8) == base_fp
            and compose(g, e).fingerprint(8) == base_fp
        )
    if c == 5:
        f = surjection_from_json(dump["f"])
        g = surjection_from_json(dump["g"])
        samples = tuple(iter_points(2, SAMPLE_STEM_LIMIT))
        tf = tuple(f.evaluate(x, SAMPLE_DIGITS).digits for x in samples)
        tg = tuple(g.evaluate(x, SAMPLE_DIGITS).digits for x in samples)
        m = _sampled_sup_exponent(tf, tg)
        d = distance(f, g)
        return m is None if d.kind == "zero" else m == d.agree_depth
    if c == 6:
        f = surjection_from_json(dump["f"])
        h = surjection_from_json(dump["h"])
        g = compose(f, h)
        ff = factor_through(g, h, 6)
        t = BoundaryTuple(f.base, 6, g.fingerprint(6))
        f2 = tuple_to_factor(h, t)
        return (
            ff.fingerprint(6) == f.fingerprint(6)
            and compose(f2, h).fingerprint(6) == t.entries
        )
    if c == 7:
        h = surjection_from_json(dump["h"])
        rep = realize_all_colors(h, 2, 20)
        return rep.complete and all(r.verified for r in rep.realizations)
    if c == 8:
        y = QCopy.from_json(dump["copy"])
        try:
            return build_witness(y, dump["target"]).color == dump["target"]
        except (RuntimeError, ValueError):
            return False
    if c == 9:
        spec = ColoringSpec.from_json(dump["spec"])
        rep = oscillation_search(spec, Fraction(3, 10))
        ok = rep.regime == "exact" and rep.guaranteed and len(rep.labels) <= 16
        if spec.kind == "relabeled_types":
            ok = ok and set(rep.labels) == set(spec.relabel)
        e = identity(2)
        for w in rep.witnesses:
            f = tuple_to_factor(e, BoundaryTuple(2, 2, w.points))
            ok = ok and spec.color_of(compose(f, e).fingerprint(2)) == w.label
        return ok
    raise ValueError(f"unknown criterion index {c!r}")
