"""Cut random copies of the rationals down to prescribed branch colors.

Draws restricted copies, prints the color each one starts with, then steers
every copy to each target in turn and shows which node got cut away and
which branch witnesses the count.
"""

import argparse

from cantorsurj.experiments import build_witness, omega_coloring, random_qcopy
from cantorsurj.randgen import derive_rng


def word(w: tuple[int, ...]) -> str:
    return "".join(map(str, w)) or "root"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", default="0")
    ap.add_argument("--copies", type=int, default=5)
    ap.add_argument("--targets", default="0,1,2,4", help="comma-separated colors to hit")
    args = ap.parse_args()

    rng = derive_rng(args.seed, "steer-demo")
    targets = [int(t) for t in args.targets.split(",") if t]
    for i in range(args.copies):
        y = random_qcopy(rng)
        pieces = ", ".join(str(p) for p in y.pieces)
        print(f"copy {i}: color {omega_coloring(y)}  pieces [{pieces}]")
        for r in targets:
            z = build_witness(y, r)
            print(f"  -> target {r}: cut {word(z.cut_node)}, keep {word(z.keep_node)}, "
                  f"color {z.color}")


if __name__ == "__main__":
    main()
