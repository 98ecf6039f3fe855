"""Residuals of the explicit SL3(Z) witnesses.

Case i runs along s_n = 1/n^2, t_n = 1/n; case ii needs t_n <= s_n and runs along the
mirrored profile s_n = 1/n, t_n = 1/n^2.
"""

import argparse
from dataclasses import dataclass
from fractions import Fraction

from primatlas.sl3_action import sl3_witness


@dataclass
class Config:
    ns: tuple = (10, 100, 1000, 10000)
    s: Fraction = Fraction(1)
    t: Fraction = Fraction(1)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=list(Config.ns))
    ap.add_argument("--s", type=Fraction, default=Config.s)
    ap.add_argument("--t", type=Fraction, default=Config.t)
    args = ap.parse_args()
    print(f"{'case':>4} {'n':>7} {'m':>9} {'k':>7} {'residual':>14}")
    for case in ("i", "ii"):
        for n in args.n:
            s_n, t_n = (Fraction(1, n * n), Fraction(1, n)) if case == "i" else (Fraction(1, n), Fraction(1, n * n))
            w = sl3_witness(case, s_n, t_n, args.s, args.t)
            print(f"{case:>4} {n:>7} {w.m:>9} {w.k:>7} {w.residual:>14.6g}")


if __name__ == "__main__":
    main()
