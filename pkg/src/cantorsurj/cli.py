"""Command line entry point.

One executable, subcommand per task, JSON as the only structured wire
format.  Structured inputs come from files ("-" reads stdin); small values
ride on flags.  Exit status: 0 on success, 1 when an assertion or
verification fails (a counterexample dump goes to stdout), 2 on malformed
input (a location note goes to stderr).  RAMSEY_DEPTH_CAP overrides the
default depth cap of 64 for every capped operation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .experiments import (
    ColoringSpec,
    QCopy,
    build_witness,
    omega_coloring,
    oscillation_search,
    realize_all_colors,
)
from .points import Point
from .similarity import (
    MAX_TYPE_LEAVES,
    TreeType,
    canonical_coloring,
    enumerate_types,
    is_strongly_diagonal,
    search_tuple_of_type,
    similarity_type,
    tangent_number,
)
from .surjections import (
    BoundaryTuple,
    FactorizationError,
    compose,
    distance,
    factor_through,
    surjection_from_json,
)

__all__ = ["main"]


class BadInput(ValueError):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise BadInput(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise BadInput(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc


def _surjection(path: str):
    obj = _read_json(path)
    try:
        return surjection_from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise BadInput(f"{path}: {exc}") from exc


def _points(path: str) -> tuple[Point, ...]:
    obj = _read_json(path)
    if isinstance(obj, dict):
        obj = obj.get("points", obj)
    if not isinstance(obj, list):
        raise BadInput(f"{path}: expected a JSON list of points")
    try:
        return tuple(Point.from_json(p) for p in obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise BadInput(f"{path}: {exc}") from exc


def _point_arg(text: str) -> Point:
    try:
        return Point.from_json(json.loads(text))
    except (ValueError, KeyError, TypeError) as exc:
        raise BadInput(f"--point: {exc}") from exc


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _levels_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip() != "")
    except ValueError as exc:
        raise BadInput(f"--levels: {exc}") from exc


# -- handlers ----------------------------------------------------------------


def _cmd_tangent(args) -> int:
    if args.k < 1:
        raise BadInput("k must be >= 1")
    print(tangent_number(args.k))
    return 0


def _cmd_types(args) -> int:
    if not 1 <= args.l <= MAX_TYPE_LEAVES:
        raise BadInput(f"l must lie in 1..{MAX_TYPE_LEAVES}")
    types = enumerate_types(args.l)
    _emit({"l": args.l, "count": len(types), "types": [list(t.levels) for t in types]})
    return 0


def _cmd_type_of(args) -> int:
    pts = _points(args.points)
    try:
        color = canonical_coloring(pts, len(pts))
    except ValueError as exc:
        raise BadInput(f"{args.points}: {exc}") from exc
    if is_strongly_diagonal(pts):
        levels = list(similarity_type(pts).levels)
    else:
        levels = None
    _emit({"l": len(pts), "diagonal": levels is not None, "color": color, "levels": levels})
    return 0


def _cmd_search_type(args) -> int:
    h = _surjection(args.surjection)
    try:
        t = TreeType(_levels_arg(args.levels))
    except ValueError as exc:
        raise BadInput(f"--levels: {exc}") from exc
    out = search_tuple_of_type(h, t, args.depth_cap, args.budget)
    _emit(
        {
            "levels": list(t.levels),
            "found": None if out.found is None else [p.to_json() for p in out.found],
            "depth": out.depth,
            "combos": out.combos,
            "exhausted": out.exhausted,
        }
    )
    return 0


def _cmd_eval(args) -> int:
    f = _surjection(args.surjection)
    x = _point_arg(args.point)
    try:
        ev = f.evaluate(x, args.digits)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    _emit(
        {
            "digits": list(ev.digits),
            "exact": None if ev.exact is None else ev.exact.to_json(),
        }
    )
    return 0


def _cmd_compose(args) -> int:
    outer = _surjection(args.outer)
    inner = _surjection(args.inner)
    try:
        _emit(compose(outer, inner).to_json())
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    return 0


def _cmd_dist(args) -> int:
    f = _surjection(args.f)
    g = _surjection(args.g)
    try:
        print(str(distance(f, g, args.cap)))
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    return 0


def _cmd_factor(args) -> int:
    g = _surjection(args.composite)
    h = _surjection(args.inner)
    try:
        f = factor_through(g, h, args.depth)
    except FactorizationError as exc:
        _emit(
            {
                "error": str(exc),
                "witness": None if exc.witness is None else exc.witness.to_json(),
                "depth": exc.depth,
            }
        )
        return 1
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    _emit(f.to_json())
    return 0


def _cmd_boundaries(args) -> int:
    f = _surjection(args.surjection)
    if args.depth < 1:
        raise BadInput("depth must be >= 1")
    try:
        entries = f.fingerprint(args.depth)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    _emit(BoundaryTuple(f.base, args.depth, entries).to_json())
    return 0


def _cmd_color_devlin(args) -> int:
    pts = _points(args.points)
    try:
        print(canonical_coloring(pts, len(pts)))
    except ValueError as exc:
        raise BadInput(f"{args.points}: {exc}") from exc
    return 0


def _cmd_color_omega(args) -> int:
    obj = _read_json(args.copy)
    try:
        y = QCopy.from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise BadInput(f"{args.copy}: {exc}") from exc
    try:
        print(omega_coloring(y, args.cap))
    except RuntimeError as exc:
        _emit({"error": str(exc)})
        return 1
    return 0


def _cmd_witness_omega(args) -> int:
    obj = _read_json(args.copy)
    try:
        y = QCopy.from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise BadInput(f"{args.copy}: {exc}") from exc
    if args.target < 0:
        raise BadInput("target must be >= 0")
    try:
        out = build_witness(y, args.target, args.cap)
    except RuntimeError as exc:
        _emit({"error": str(exc), "target": args.target})
        return 1
    _emit(out.to_json())
    return 0


def _cmd_realize_all(args) -> int:
    h = _surjection(args.surjection)
    if args.k < 1:
        raise BadInput("k must be >= 1")
    try:
        rep = realize_all_colors(h, args.k, args.depth_cap, args.budget)
    except RuntimeError as exc:
        _emit({"error": str(exc)})
        return 1
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    _emit(rep.to_json())
    return 0


def _cmd_oscillation(args) -> int:
    obj = _read_json(args.coloring)
    try:
        spec = ColoringSpec.from_json(obj)
        eps = Fraction(args.eps)
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise BadInput(str(exc)) from exc
    try:
        rep = oscillation_search(spec, eps, args.budget, args.seed)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    except RuntimeError as exc:
        _emit({"error": str(exc)})
        return 1
    _emit(rep.to_json())
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_suite

    only = None
    if args.only:
        try:
            only = {int(t) for t in args.only.split(",") if t.strip() != ""}
        except ValueError as exc:
            raise BadInput(f"--only: {exc}") from exc
        unknown = only - set(range(1, 10))
        if unknown:
            raise BadInput(f"--only: no such checks {sorted(unknown)}")
    rep = run_suite(args.seed, only)
    if args.json:
        _emit(rep.to_json())
    else:
        sys.stdout.write(rep.render())
    return 0 if rep.passed else 1


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cantorsurj",
        description="Exact combinatorics of monotone surjections of the Cantor space.",
    )
    sub = p.add_subparsers(dest="verb", required=True)

    def cap_flag(sp):
        sp.add_argument("--cap", type=int, default=None, help="depth cap override")

    sp = sub.add_parser("tangent", help="k-th odd tangent number")
    sp.add_argument("k", type=int)
    sp.set_defaults(fn=_cmd_tangent)

    sp = sub.add_parser("types", help="enumerate similarity types with l leaves")
    sp.add_argument("l", type=int)
    sp.set_defaults(fn=_cmd_types)

    sp = sub.add_parser("type-of", help="similarity type and color of a point tuple")
    sp.add_argument("points", help="JSON file: list of points")
    sp.set_defaults(fn=_cmd_type_of)

    sp = sub.add_parser("search-type", help="first max-set tuple realizing a type")
    sp.add_argument("surjection", help="JSON file")
    sp.add_argument("--levels", required=True, help="comma-separated level ranks")
    sp.add_argument("--depth-cap", type=int, default=None)
    sp.add_argument("--budget", type=int, default=400_000)
    sp.set_defaults(fn=_cmd_search_type)

    sp = sub.add_parser("eval", help="image digits of a point")
    sp.add_argument("surjection", help="JSON file")
    sp.add_argument("--point", required=True, help="inline JSON point")
    sp.add_argument("--digits", type=int, default=24)
    sp.set_defaults(fn=_cmd_eval)

    sp = sub.add_parser("compose", help="compose two surjections (outer first)")
    sp.add_argument("outer", help="JSON file")
    sp.add_argument("inner", help="JSON file")
    sp.set_defaults(fn=_cmd_compose)

    sp = sub.add_parser("dist", help="exact sup-metric distance token")
    sp.add_argument("f", help="JSON file")
    sp.add_argument("g", help="JSON file")
    cap_flag(sp)
    sp.set_defaults(fn=_cmd_dist)

    sp = sub.add_parser("factor", help="solve composite = f o inner for f")
    sp.add_argument("composite", help="JSON file")
    sp.add_argument("inner", help="JSON file")
    sp.add_argument("--depth", type=int, required=True)
    sp.set_defaults(fn=_cmd_factor)

    sp = sub.add_parser("boundaries", help="depth-k fingerprint of a surjection")
    sp.add_argument("surjection", help="JSON file")
    sp.add_argument("--depth", type=int, required=True)
    sp.set_defaults(fn=_cmd_boundaries)

    sp = sub.add_parser("color-devlin", help="canonical type color of a point tuple")
    sp.add_argument("points", help="JSON file: list of points")
    sp.set_defaults(fn=_cmd_color_devlin)

    sp = sub.add_parser("color-omega", help="branch-comparison color of a copy")
    sp.add_argument("copy", help="JSON file")
    cap_flag(sp)
    sp.set_defaults(fn=_cmd_color_omega)

    sp = sub.add_parser("witness-omega", help="cut a copy down to a target color")
    sp.add_argument("copy", help="JSON file")
    sp.add_argument("--target", type=int, required=True)
    cap_flag(sp)
    sp.set_defaults(fn=_cmd_witness_omega)

    sp = sub.add_parser("realize-all", help="realize every color over an inner surjection")
    sp.add_argument("surjection", help="JSON file")
    sp.add_argument("--k", type=int, required=True, help="fingerprint depth")
    sp.add_argument("--depth-cap", type=int, default=None)
    sp.add_argument("--budget", type=int, default=400_000)
    sp.set_defaults(fn=_cmd_realize_all)

    sp = sub.add_parser("oscillation", help="shrink a coloring's range on a cube")
    sp.add_argument("coloring", help="JSON file: coloring spec")
    sp.add_argument("--eps", required=True, help="resolution, e.g. 0.3 or 3/10")
    sp.add_argument("--budget", type=int, default=400_000)
    sp.add_argument("--seed", required=True, help="seed for the heuristic regime")
    sp.set_defaults(fn=_cmd_oscillation)

    sp = sub.add_parser("verify", help="run the seeded verification suite")
    sp.add_argument("--seed", required=True)
    sp.add_argument("--only", default="", help="comma-separated check indices")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=_cmd_verify)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.fn(args)
        sys.stdout.flush()
        return code
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # a downstream pager closed early; silence the shutdown flush too
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
