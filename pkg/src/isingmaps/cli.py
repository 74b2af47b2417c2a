"""Command-line interface: every pipeline as a reproducible, machine-readable run.

Parameters are parsed as exact rationals (decimal strings or "p/q"), never
round-tripped through binary floats.  Output is a JSON envelope with the
command, the parsed configuration, the result, and provenance metadata
(precision, warnings, timing); tabular commands can emit CSV instead.  Exit
codes: 0 success, 1 computational error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath

from .critical import (
    chi_closed,
    exponent_fit,
    finite_free_energy,
    finite_magnetization,
    finite_susceptibility,
    free_energy,
    m0_closed,
    thermo_magnetization,
    thermo_susceptibility,
)
from .errors import ComputationError
from .exactalg import sturm_count
from .mapcount import survey
from .precision import default_precision_bits
from .series import IsingParams, coefficient_sequence, solve_Z
from .singular import (
    discriminant_in_z,
    dominant_expansions,
    characteristic_root_polynomial,
    p1_p2_p3,
    radius_numeric,
    rho_closed_form,
)

COMMANDS = ("coeffs", "enumerate", "radius", "puiseux", "observables",
            "exponent-fit", "check")


# ---------------------------------------------------------------------------
# Parsing and formatting
# ---------------------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    """Exact rational from a decimal string or "p/q"."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a rational: %r" % text)


def parse_rational_list(text: str) -> Tuple[Fraction, ...]:
    return tuple(parse_rational(part) for part in text.split(","))


def _digits(bits: int) -> int:
    return max(8, int(bits * 0.30103) - 2)


def format_value(x, dps: int = 17) -> str:
    """Rationals as "p/q", floats as decimal strings, infinity as "inf"."""
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if x == mpmath.inf:
        return "inf"
    return mpmath.nstr(x, dps)


def polynomial_string(poly) -> str:
    """Canonical string of a polynomial in nu and c, highest degrees first."""
    items = sorted(poly.terms.items(), key=lambda kv: kv[0], reverse=True)
    if not items:
        return "0"
    parts = []
    for (dn, dc), coef in items:
        mono = []
        if dn:
            mono.append("nu" if dn == 1 else "nu^%d" % dn)
        if dc:
            mono.append("c" if dc == 1 else "c^%d" % dc)
        mag = abs(coef)
        if not mono:
            piece = str(mag)
        elif mag == 1:
            piece = "*".join(mono)
        else:
            piece = "*".join([str(mag)] + mono)
        parts.append((coef < 0, piece))
    head_neg, head = parts[0]
    out = ("-" + head) if head_neg else head
    for neg, piece in parts[1:]:
        out += (" - " if neg else " + ") + piece
    return out


def _interval(iv, dps: int) -> List[str]:
    return [format_value(iv[0], dps), format_value(iv[1], dps)]


# ---------------------------------------------------------------------------
# Command implementations.  Each returns (result, warnings, csv_rows) where
# csv_rows is None for commands without a tabular form.
# ---------------------------------------------------------------------------

def _cmd_coeffs(args, bits):
    n_max = args.n_max
    if n_max < 1:
        raise ValueError("--n-max must be at least 1")
    rows = []
    if args.symbolic:
        series = solve_Z(IsingParams(nu=2, c=1), n_max)
        for n in range(1, n_max + 1):
            rows.append({"n": n, "value": polynomial_string(series.coefficient(n))})
    elif args.numeric:
        if args.nu is None or args.c is None:
            raise ValueError("--numeric requires --nu and --c")
        params = IsingParams(nu=args.nu, c=args.c, precision_bits=bits)
        seq = coefficient_sequence(params, n_max)
        dps = _digits(bits)
        for n in range(1, n_max + 1):
            rows.append({"n": n, "value": format_value(seq[n - 1], dps)})
    else:
        if args.nu is None or args.c is None:
            raise ValueError("coeffs needs --symbolic, or --nu and --c")
        series = solve_Z(IsingParams(nu=2, c=1), n_max)
        for n in range(1, n_max + 1):
            value = series.coefficient(n).evaluate(args.nu, args.c)
            rows.append({"n": n, "value": format_value(value)})
    csv_rows = [("n", "value")] + [(r["n"], r["value"]) for r in rows]
    return {"coefficients": rows}, [], csv_rows


def _cmd_enumerate(args, bits):
    report = survey(args.n)
    result = {
        "n": report.n,
        "partition_polynomial": polynomial_string(report.partition_polynomial),
        "maps": report.rooted_map_count,
        "total_matchings": report.total_matchings,
        "connected_matchings": report.connected_matchings,
        "planar_matchings": report.planar_matchings,
    }
    return result, [], None


def _radius_point(nu: Fraction, c: Fraction, tol: Fraction, allow_far_field: bool,
                  with_exponent: bool, dps: int) -> dict:
    report = radius_numeric(
        IsingParams(nu=nu, c=c), tol=tol, allow_far_field=allow_far_field,
        with_exponent=with_exponent,
    )

    def enc(value: Fraction) -> str:
        # exact singularities stay rational; certified midpoints are decimals
        if report.exact:
            return str(value)
        with mpmath.workprec(int(dps * 3.33) + 8):
            return mpmath.nstr(mpmath.mpf(value.numerator) / value.denominator,
                               dps)

    return {
        "nu": str(nu),
        "c": str(c),
        "rho": enc(report.rho),
        "rho_interval": [enc(report.rho_interval[0]), enc(report.rho_interval[1])],
        "mu": enc(report.mu),
        "mu_interval": [enc(report.mu_interval[0]), enc(report.mu_interval[1])],
        "s_at_rho": enc(report.s_at_rho),
        "s_interval": [enc(report.s_interval[0]), enc(report.s_interval[1])],
        "exponent": None if report.exponent is None else str(report.exponent),
        "exact": report.exact,
        "unique_on_circle": report.uniqueness_checked,
        "warnings": list(report.warnings),
    }


def _radius_worker(spec):
    nu, c, tol, allow, with_exp, dps = spec
    return _radius_point(nu, c, tol, allow, with_exp, dps)


def _cmd_radius(args, bits):
    dps = _digits(bits)
    specs = [(nu, c, args.tol, args.allow_far_field, not args.no_exponent, dps)
             for nu in args.nu for c in args.c]
    if args.jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            points = list(pool.map(_radius_worker, specs))
    else:
        points = [_radius_worker(spec) for spec in specs]
    warnings = [w for p in points for w in p["warnings"]]
    csv_rows = [("nu", "c", "rho", "mu", "exponent")] + [
        (p["nu"], p["c"], p["rho"], p["mu"], p["exponent"] or "") for p in points
    ]
    if len(points) == 1:
        return points[0], warnings, csv_rows
    return {"points": points}, warnings, csv_rows


def _cmd_puiseux(args, bits):
    dps = _digits(bits)
    params = IsingParams(nu=args.nu, c=args.c)
    report, expansions = dominant_expansions(
        params, max_terms=args.max_terms, precision_bits=bits
    )
    branches = []
    dominant: Optional[Fraction] = None
    for exp in expansions:
        terms = [{"exponent": str(e), "coefficient": format_value(coef, dps)}
                 for coef, e in exp.terms]
        lead = exp.leading_exponent()
        branches.append({
            "leading_exponent": None if lead is None else str(lead),
            "ramification": exp.ramification,
            "exact": exp.exact,
            "terms": terms,
        })
        for _, e in exp.terms:
            if e.denominator != 1 and (dominant is None or e < dominant):
                dominant = e
                break
    result = {
        "rho": format_value(report.rho, dps),
        "s_at_rho": format_value(report.s_at_rho, dps),
        "exact_center": report.exact,
        "exponent": None if dominant is None else str(dominant),
        "branches": branches,
    }
    return result, list(report.warnings), None


def _cmd_observables(args, bits):
    dps = _digits(bits)
    if args.n is not None:
        params = IsingParams(nu=args.nu, c=args.c)
        result = {
            "n": args.n,
            "F": format_value(finite_free_energy(args.n, params, bits), dps),
            "M": format_value(finite_magnetization(args.n, params), dps),
            "chi": format_value(finite_susceptibility(args.n, params), dps),
        }
        return result, [], None
    params = IsingParams(nu=args.nu, c=args.c)
    result = {"F": format_value(free_energy(params, bits), dps)}
    if args.c == 1:
        result["M0"] = format_value(m0_closed(args.nu, bits), dps)
        result["chi"] = format_value(chi_closed(args.nu, bits), dps)
    else:
        result["M"] = format_value(
            thermo_magnetization(args.nu, args.c, precision_bits=bits), dps)
        result["chi"] = format_value(
            thermo_susceptibility(args.nu, args.c, precision_bits=bits), dps)
    return result, [], None


def _cmd_exponent_fit(args, bits):
    dps = _digits(bits)
    if args.n_max < 4:
        raise ValueError("--n-max must be at least 4")
    n_min = args.n_min if args.n_min is not None else max(2, args.n_max // 8)
    params = IsingParams(nu=args.nu, c=args.c, precision_bits=bits)
    seq = coefficient_sequence(params, args.n_max)
    report = radius_numeric(IsingParams(nu=args.nu, c=args.c), tol=args.tol)
    fit = exponent_fit(seq, report.mu, (n_min, args.n_max), precision_bits=bits)
    result = {
        "mu": format_value(report.mu, dps),
        "mu_exact": report.exact,
        "alpha_exponent": format_value(fit.alpha_exponent, dps),
        "aitken_exponent": format_value(fit.aitken_exponent, dps),
        "amplitude": format_value(fit.amplitude, dps),
        "residual": format_value(fit.residual, dps),
        "n_range": list(fit.n_range),
    }
    return result, [], None


def _check_battery(bits) -> List[dict]:
    checks = []

    def add(name: str, ok: bool, detail: str):
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    # the two closed-form branches agree at the critical coupling
    nu = Fraction(4)
    root = Fraction(2)  # sqrt(4)
    low_rho = 2 * (1 + 2 * root) / (9 * (1 + root) ** 2 * (1 + nu) ** 2)
    high_rho = (3 * nu ** 2 - 8) / (36 * (nu ** 2 - 1) ** 2)
    low_s = Fraction(1, 3) / ((root + 1) * (nu + 1))
    high_s = Fraction(1, 3) / (nu ** 2 - 1)
    add("branch_continuity",
        low_rho == high_rho == Fraction(2, 405)
        and low_s == high_s == Fraction(1, 45),
        "rho=%s s=%s" % (high_rho, high_s))

    # certified radius against the closed form
    ok = True
    details = []
    for nu_q in (Fraction(1, 4), Fraction(5)):
        rep = radius_numeric(IsingParams(nu=nu_q, c=1), tol=Fraction(1, 10 ** 12),
                             with_exponent=False)
        closed = rho_closed_form(nu_q)
        lo, hi = rep.rho_interval
        good = lo - Fraction(1, 10 ** 10) <= closed <= hi + Fraction(1, 10 ** 10)
        ok = ok and good
        details.append("nu=%s:%s" % (nu_q, "ok" if good else "MISMATCH"))
    add("radius_closed_form", ok, " ".join(details))

    # discriminant divisibility by P1^3 P2 P3 with a z-linear quotient
    ok = True
    details = []
    for nu_q in (Fraction(2), Fraction(5)):
        disc = discriminant_in_z(IsingParams(nu=nu_q, c=1))
        p1, p2, p3 = p1_p2_p3(nu_q)
        try:
            q = disc
            for factor in (p1, p1, p1, p2, p3):
                q = q.exact_div(factor)
            good = q.degree() <= 1
        except ComputationError:
            good = False
        ok = ok and good
        details.append("nu=%s:%s" % (nu_q, "ok" if good else "FAIL"))
    add("discriminant_divisibility", ok, " ".join(details))

    # exactly one characteristic root in the physical interval
    ok = True
    count_list = []
    for nu_q in (Fraction(1, 2), Fraction(2), Fraction(5)):
        for c_q in (Fraction(9, 10), Fraction(19, 20), Fraction(1)):
            poly = characteristic_root_polynomial(IsingParams(nu=nu_q, c=c_q))
            bound = 1 / (3 * c_q ** 2 * abs(1 - nu_q ** 2))
            count = sturm_count(poly, Fraction(0), bound)
            ok = ok and count == 1
            count_list.append(count)
    add("sturm_single_root", ok, "counts=%s" % count_list)

    # closed-form observables at rational points
    add("observable_closed_forms",
        m0_closed(4) == 0 and m0_closed(5) == Fraction(45, 67)
        and chi_closed(1) == 1 and chi_closed(4) == mpmath.inf,
        "M0(4)=0 M0(5)=45/67 chi(1)=1 chi(4)=inf")

    # dominant singular exponents
    ok = True
    details = []
    for nu_q, expected in ((Fraction(4), Fraction(1, 3)),
                           (Fraction(5), Fraction(1, 2)),
                           (Fraction(2), Fraction(1, 2))):
        rep = radius_numeric(IsingParams(nu=nu_q, c=1), with_exponent=True)
        good = rep.exponent == expected
        ok = ok and good
        details.append("nu=%s:%s" % (nu_q, rep.exponent))
    add("singular_exponents", ok, " ".join(details))
    return checks


def _cmd_check(args, bits):
    checks = _check_battery(bits)
    ok = all(c["ok"] for c in checks)
    return {"ok": ok, "checks": checks}, [], None


_HANDLERS = {
    "coeffs": _cmd_coeffs,
    "enumerate": _cmd_enumerate,
    "radius": _cmd_radius,
    "puiseux": _cmd_puiseux,
    "observables": _cmd_observables,
    "exponent-fit": _cmd_exponent_fit,
    "check": _cmd_check,
}


# ---------------------------------------------------------------------------
# Envelope assembly and entry point
# ---------------------------------------------------------------------------

def _config_dict(args) -> dict:
    out = {}
    for key in ("nu", "c", "n", "n_max", "n_min", "max_terms", "tol",
                "precision_bits", "format", "out", "jobs", "symbolic",
                "numeric", "allow_far_field", "no_exponent"):
        if not hasattr(args, key):
            continue
        value = getattr(args, key)
        if value is None:
            continue
        if isinstance(value, Fraction):
            value = str(value)
        elif isinstance(value, tuple):
            value = [str(v) for v in value]
        out[key] = value
    return out


def _emit(text: str, out_path: Optional[str]):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, metavar="PATH")
    common.add_argument("--precision-bits", type=int, default=None,
                        dest="precision_bits")
    common.add_argument("--tol", type=parse_rational,
                        default=Fraction(1, 10 ** 12))
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(
        prog="isingmaps",
        description="Exact and certified-numeric pipelines for the "
                    "spin-decorated map ensemble.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common],
                       help="partition-function coefficients")
    p.add_argument("--n-max", type=int, default=5, dest="n_max")
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--nu", type=parse_rational, default=None)
    p.add_argument("--c", type=parse_rational, default=None)

    p = sub.add_parser("enumerate", parents=[common],
                       help="exhaustive map enumeration oracle")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("radius", parents=[common],
                       help="certified dominant singularity")
    p.add_argument("--nu", type=parse_rational_list, required=True)
    p.add_argument("--c", type=parse_rational_list, required=True)
    p.add_argument("--allow-far-field", action="store_true",
                   dest="allow_far_field")
    p.add_argument("--no-exponent", action="store_true", dest="no_exponent")

    p = sub.add_parser("puiseux", parents=[common],
                       help="fractional-power branches at the singularity")
    p.add_argument("--nu", type=parse_rational, required=True)
    p.add_argument("--c", type=parse_rational, required=True)
    p.add_argument("--max-terms", type=int, default=3, dest="max_terms")

    p = sub.add_parser("observables", parents=[common],
                       help="free energy, magnetization, susceptibility")
    p.add_argument("--nu", type=parse_rational, required=True)
    p.add_argument("--c", type=parse_rational, required=True)
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("exponent-fit", parents=[common],
                       help="coefficient-asymptotics exponent fit")
    p.add_argument("--nu", type=parse_rational, required=True)
    p.add_argument("--c", type=parse_rational, required=True)
    p.add_argument("--n-max", type=int, default=400, dest="n_max")
    p.add_argument("--n-min", type=int, default=None, dest="n_min")

    sub.add_parser("check", parents=[common],
                   help="run the invariant battery")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    bits = args.precision_bits or default_precision_bits()
    started = time.time()
    try:
        if args.jobs < 1:
            raise ValueError("--jobs must be at least 1")
        result, warnings, csv_rows = _HANDLERS[args.command](args, bits)
    except ComputationError as exc:
        envelope = {
            "command": args.command,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _emit(json.dumps(envelope, sort_keys=True, indent=2) + "\n", args.out)
        return 1
    except ValueError as exc:
        envelope = {
            "command": args.command,
            "error": {"type": "UsageError", "message": str(exc)},
        }
        _emit(json.dumps(envelope, sort_keys=True, indent=2) + "\n", args.out)
        return 2

    if args.format == "csv":
        if csv_rows is None:
            envelope = {
                "command": args.command,
                "error": {"type": "UsageError",
                          "message": "no CSV form for this command"},
            }
            _emit(json.dumps(envelope, sort_keys=True, indent=2) + "\n",
                  args.out)
            return 2
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerows(csv_rows)
        _emit(buf.getvalue(), args.out)
        return 0

    envelope = {
        "command": args.command,
        "config": _config_dict(args),
        "result": result,
        "meta": {
            "precision_bits": bits,
            "warnings": sorted(set(warnings)),
            "elapsed_seconds": round(time.time() - started, 6),
        },
    }
    _emit(json.dumps(envelope, sort_keys=True, indent=2) + "\n", args.out)
    if args.command == "check" and not result["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
