#!/usr/bin/env python3
"""Profile the magnetization transition at nu = 4.

Three views of the same point:
  1. spontaneous magnetization M0(nu) switching on at nu = 4 with a
     square-root onset, susceptibility diverging from below;
  2. the branch exponent of the generating function changing from 1/2 to
     1/3 exactly at the transition;
  3. one-sided finite differences of -log rho(nu) showing first and second
     derivatives continuous across nu = 4 while the third jumps: a
     third-order transition.
"""
import argparse
from fractions import Fraction

import mpmath

from isingmaps.critical import chi_closed, m0_closed
from isingmaps.precision import to_mpf
from isingmaps.series import IsingParams
from isingmaps.singular import radius_numeric, rho_closed_form


def scan_observables(offsets):
    print("== observables near the transition ==")
    print("%-14s %-16s %-16s" % ("nu", "M0", "chi"))
    for eps in offsets:
        for nu in (4 * (1 - eps), 4 * (1 + eps)):
            m0 = m0_closed(nu, precision_bits=160)
            chi = chi_closed(nu, precision_bits=160)
            print("%-14s %-16s %-16s" % (
                "4*(1%+g)" % (Fraction(nu, 4) - 1),
                mpmath.nstr(to_mpf(m0), 8) if m0 else "0",
                "inf" if chi == mpmath.inf else mpmath.nstr(to_mpf(chi), 8),
            ))


def scan_exponent():
    print("\n== branch exponent across nu = 4 (c = 1) ==")
    for nu in (Fraction(2), Fraction(7, 2), Fraction(4), Fraction(5)):
        report = radius_numeric(IsingParams(nu=nu, c=1), with_exponent=True)
        print("  nu = %-6s  exponent = %s" % (nu, report.exponent))


def scan_derivatives(h: Fraction, bits: int):
    print("\n== one-sided derivatives of -log rho at nu = 4 (h = %s) ==" % h)

    def G(nu):
        r = rho_closed_form(nu, precision_bits=bits)
        with mpmath.workprec(bits):
            return -mpmath.log(to_mpf(r) if isinstance(r, Fraction) else r)

    with mpmath.workprec(bits):
        hh = to_mpf(h)
        right = [G(4 + i * h) for i in range(5)]
        left = [G(4 - i * h) for i in range(5)]

        def stencils(f, sign):
            d1 = sign * (-3 * f[0] + 4 * f[1] - f[2]) / (2 * hh)
            d2 = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / hh ** 2
            d3 = sign * (-5 * f[0] + 18 * f[1] - 24 * f[2] + 14 * f[3]
                         - 3 * f[4]) / (2 * hh ** 3)
            return d1, d2, d3

        from_right = stencils(right, 1)
        from_left = stencils(left, -1)
        for order, (r, l) in enumerate(zip(from_right, from_left), start=1):
            print("  d%d: right %-22s left %-22s |gap| %s" % (
                order, mpmath.nstr(r, 12), mpmath.nstr(l, 12),
                mpmath.nstr(abs(r - l), 4)))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--offsets", type=Fraction, nargs="+",
                    default=[Fraction(1, 100), Fraction(1, 10 ** 4)])
    ap.add_argument("--h", type=Fraction, default=Fraction(1, 10 ** 6))
    ap.add_argument("--precision-bits", type=int, default=320)
    args = ap.parse_args()

    scan_observables(args.offsets)
    scan_exponent()
    scan_derivatives(args.h, args.precision_bits)


if __name__ == "__main__":
    main()
