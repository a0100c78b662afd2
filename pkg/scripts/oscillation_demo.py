"""Shrink a coloring's visible range on a cube of composites.

With --collapse the 16 type classes are relabeled onto a handful of values
and the exact regime proves the small range; with --table the coloring no
longer factors through types and the seeded heuristic takes over.
"""

import argparse
from fractions import Fraction

from cantorsurj.experiments import ColoringSpec, oscillation_search


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--collapse", type=int, default=0, help="relabel the 16 classes mod this")
    ap.add_argument("--table", action="store_true", help="use an ad-hoc lookup coloring instead")
    ap.add_argument("--eps", default="0.3")
    ap.add_argument("--seed", default="0")
    ap.add_argument("--budget", type=int, default=120_000)
    args = ap.parse_args()

    if args.table:
        spec = ColoringSpec(2, 2, 4, "table", table=(("00|0|10", 3),), constant=1)
    elif args.collapse:
        spec = ColoringSpec(2, 2, 16, "relabeled_types",
                            relabel=tuple(i % args.collapse for i in range(16)))
    else:
        spec = ColoringSpec(2, 2, 16, "relabeled_types", relabel=tuple(range(16)))

    rep = oscillation_search(spec, Fraction(args.eps), budget=args.budget, seed=args.seed)
    print(f"regime: {rep.regime}  guaranteed: {rep.guaranteed}  "
          f"labels achieved: {rep.labels}")
    for w in rep.witnesses:
        stems = " ".join("".join(map(str, p.stem)) for p in w.points)
        kind = "heuristic" if w.type_index is None else f"type {w.type_index:2d}"
        print(f"  label {w.label:2d}  {kind}  stems {stems}")


if __name__ == "__main__":
    main()
