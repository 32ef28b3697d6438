"""Scan levels k and report where Q_(0)² vanishes for BRST(sl2_k, V_k(sl2), id)."""

import argparse
from fractions import Fraction

from chiralbrst.chiral_brst_glue import affine_chiral_brst, chiral_square
from chiralbrst.dglie_ce import sl2


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--levels", nargs="+", default=["-6", "-4", "-2", "0", "1", "1/2"])
    p.add_argument("--w-max", type=int, default=2)
    args = p.parse_args()
    g = sl2()
    for k in args.levels:
        sq = chiral_square(affine_chiral_brst(g, Fraction(k), args.w_max, check=False))
        if sq:
            low = min(sq, key=lambda key: (key[1], key[0]))
            print(f"k = {k:>5}: Q² ≠ 0 on {sum(sq.values())} basis vectors, lowest block {low}")
        else:
            print(f"k = {k:>5}: Q² = 0 up to weight {args.w_max}")


if __name__ == "__main__":
    main()
