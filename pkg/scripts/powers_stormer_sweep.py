"""Sweep the Powers-Stormer bound over Heisenberg irreducibles and Folner boxes."""

import argparse
import math
from dataclasses import dataclass
from fractions import Fraction

from primatlas.heisenberg import HeisPrim, heis_irrep
from primatlas.weak_containment import FinRep, FolnerSet, amenability_witness


@dataclass
class Config:
    max_order: int = 5
    max_box: int = 6
    a: Fraction = Fraction(1, 7)
    b: Fraction = Fraction(2, 9)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=Config.max_order)
    ap.add_argument("--max-box", type=int, default=Config.max_box)
    args = ap.parse_args()
    boxes = {N: FolnerSet.h3_box(N) for N in range(1, args.max_box + 1)}
    worst = math.inf
    print(f"{'n':>2} {'z':>5} {'N':>2} {'gen':>3} {'defect^2':>12} {'ratio':>12} ok")
    for n in range(1, args.max_order + 1):
        for c in (c for c in range(n) if math.gcd(c, n) == 1):
            pi = FinRep.from_heis_irrep(heis_irrep(HeisPrim(Fraction(c, n), Config.a, Config.b)))
            for N, F in boxes.items():
                for row in amenability_witness(pi, F, check=False).rows:
                    worst = min(worst, float(row.folner_ratio) - row.defect_sq)
                    print(f"{n:>2} {str(Fraction(c, n)):>5} {N:>2} {row.generator:>3} "
                          f"{row.defect_sq:12.4e} {float(row.folner_ratio):12.4e} {row.bound_ok}")
    print(f"smallest slack ratio - defect^2: {worst:.3e}")


if __name__ == "__main__":
    main()
