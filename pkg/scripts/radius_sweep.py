#!/usr/bin/env python3
"""Sweep the certified dominant singularity over a parameter grid.

Writes one CSV row per (nu, c) point: the certified radius rho, mu = c*rho,
S(rho), the branch exponent when requested, and whether the values are exact
rationals.  Equivalent to `isingmaps radius --format csv` but convenient for
scripted grids (linear ranges instead of explicit lists).
"""
import argparse
import csv
import sys
from fractions import Fraction

from isingmaps.series import IsingParams
from isingmaps.singular import radius_numeric


def frange(lo: Fraction, hi: Fraction, count: int):
    if count == 1:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + k * step for k in range(count)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nu-lo", type=Fraction, default=Fraction(1, 4))
    ap.add_argument("--nu-hi", type=Fraction, default=Fraction(8))
    ap.add_argument("--nu-count", type=int, default=32)
    ap.add_argument("--c", type=Fraction, default=Fraction(1))
    ap.add_argument("--tol", type=Fraction, default=Fraction(1, 10 ** 12))
    ap.add_argument("--with-exponent", action="store_true")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(fh)
    writer.writerow(["nu", "c", "rho", "mu", "s_at_rho", "exponent", "exact"])
    for nu in frange(args.nu_lo, args.nu_hi, args.nu_count):
        report = radius_numeric(
            IsingParams(nu=nu, c=args.c), tol=args.tol,
            with_exponent=args.with_exponent,
        )
        writer.writerow([
            nu, args.c,
            report.rho if report.exact else float(report.rho),
            report.mu if report.exact else float(report.mu),
            report.s_at_rho if report.exact else float(report.s_at_rho),
            report.exponent if report.exponent is not None else "",
            int(report.exact),
        ])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
