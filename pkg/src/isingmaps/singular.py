"""Singularity analysis for the map partition-function series.

Everything here works at an exact rational parameter point (nu, c).  The
radius of convergence rho of the z-series is located through the
characteristic equation of the defining fixed point: writing the defining
equation as z = S N(S)/D(S)^2, the value s* = S(rho) is a root of

    Q1(S) * Q2(S),   Q1 = D,   Q2 = D N - 2 S D' N + S D N',

and in the validated parameter region it is the unique root of Q2 in
(0, 1/(3 c^2 |1 - nu^2|)].  rho is recovered by evaluating the defining
rational function at s*, with certified interval arithmetic; mu = c * rho.

Singular exponents are obtained from Newton-polygon Puiseux expansions of
the cancelling polynomial z D(S)^2 - S N(S) shifted to (rho, s*): slope 1/2
branches generically, 1/3 at the critical point (nu, c) = (4, 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath

from .errors import (
    DegenerateBranch,
    FactorizationMismatch,
    NoRootInRange,
    PrecisionExhausted,
)
from .exactalg import (
    SturmChain,
    UniPoly,
    cauchy_root_bound,
    discriminant,
    poly_gcd,
    poly_gcd_field,
    rational_sqrt,
    refine_isolated_root,
    squarefree_part,
    sturm_count,
)
from .precision import default_precision_bits, to_mpf
from .series import IsingParams, lagrangian_numer_denom

VALIDATED_C_HALF_WIDTH = Fraction(1, 4)

Number = Union[Fraction, mpmath.mpf]


# ---------------------------------------------------------------------------
# Characteristic factors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharFactors:
    """The two factors of the characteristic-equation numerator."""

    q1: UniPoly
    q2: UniPoly


def char_factors(params: IsingParams) -> CharFactors:
    """Q1 = D and Q2 = D N - 2 S D' N + S D N', over exact rationals.

    The product Q1*Q2 is re-derived independently from the quotient rule and
    compared; a mismatch means the tables or the algebra are corrupted.
    """
    n_poly, d_poly = lagrangian_numer_denom(params, symbolic=False)
    s_var = UniPoly.variable()
    n_prime = n_poly.derivative()
    d_prime = d_poly.derivative()
    q1 = d_poly
    q2 = d_poly * n_poly - (s_var * d_prime * n_poly).scale(Fraction(2)) \
        + s_var * d_poly * n_prime
    # numerator of phi - S*phi' for phi = D^2/N, cleared over N^2
    direct = d_poly * d_poly * n_poly \
        - (s_var * d_poly * d_prime * n_poly).scale(Fraction(2)) \
        + s_var * d_poly * d_poly * n_prime
    if q1 * q2 != direct:
        raise FactorizationMismatch(
            "characteristic factors do not multiply back to the cleared numerator"
        )
    return CharFactors(q1=q1, q2=q2)


def characteristic_root_polynomial(params: IsingParams) -> UniPoly:
    """Numerator of z'(s) for the reduced defining function, poles stripped.

    Away from c = 1 the defining function s N/D^2 is already in lowest terms
    and this is exactly Q2.  At c = 1 the numerator N degenerates to
    (1 + 3(1-nu^2)S)^2 * Ntilde; reducing the fraction first and then
    removing any factor shared with the reduced denominator discards the
    spurious pole-located roots Q2 inherits from D (they sit exactly at the
    end of the search interval for nu on one side of 1), while the genuine
    critical point always survives - for nu >= 4 it coincides with the
    cancelled-factor location but persists as a root of Ntilde'.
    """
    num, den = _reduced_radius_parts(params)
    g_poly = num.derivative() * den - num * den.derivative()
    g = poly_gcd_field(g_poly, den)
    while g.degree() >= 1:
        g_poly = g_poly.exact_div(g)
        g = poly_gcd_field(g_poly, den)
    sf = squarefree_part(g_poly)
    bound = _root_interval_bound(params)
    if bound == 0:
        bound = cauchy_root_bound(sf)
    # At c = 1 with nu between 1 and 4 the endpoint of the search interval is
    # itself a critical point, but of a further sheet (its z-value lies below
    # the radius); it is only the dominant point when it is the *sole* root.
    if sf.eval_scalar(bound) == 0 and SturmChain(sf).count(Fraction(0), bound) > 1:
        sf = sf.exact_div(UniPoly([-bound, Fraction(1)]))
    return sf


def cancelling_polynomial(params: IsingParams) -> UniPoly:
    """z D(S)^2 - S N(S) as a polynomial in S over Q[z] (z-degree 1).

    Coefficients are UniPoly in z over exact rationals at the point.
    """
    n_poly, d_poly = lagrangian_numer_denom(params, symbolic=False)
    d_sq = d_poly * d_poly
    s_n = UniPoly.variable() * n_poly
    deg = max(d_sq.degree(), s_n.degree())
    zero_z = UniPoly([], zero=Fraction(0))
    coeffs = []
    for k in range(deg + 1):
        coeffs.append(UniPoly([-s_n.coeff(k), d_sq.coeff(k)]))
    return UniPoly(coeffs, zero=zero_z)


def cancelling_polynomial_squarefree(params: IsingParams) -> UniPoly:
    """The cancelling polynomial with repeated S-factors removed.

    At c = 1 the cleared form acquires a squared linear factor in S (the
    numerator N degenerates to a perfect-square multiple), which would make
    its discriminant vanish identically; stripping gcd(C, dC/dS) restores a
    meaningful discriminant while keeping the same curve.
    """
    c_poly = cancelling_polynomial(params)
    g = poly_gcd(c_poly, c_poly.derivative())
    if g.degree() < 1:
        return c_poly
    return c_poly.exact_div(g)


def discriminant_in_z(params: IsingParams) -> UniPoly:
    """Discriminant (in S) of the squarefree cancelling polynomial.

    Returned as a UniPoly in z with exact rational coefficients at the point.
    """
    c_sf = cancelling_polynomial_squarefree(params)
    return discriminant(c_sf)


def p1_p2_p3(nu: Fraction) -> Tuple[UniPoly, UniPoly, UniPoly]:
    """The three singularity-candidate factors of the discriminant at c = 1.

    P1 is linear, P2 quadratic, and P3(nu, z) = P2(-nu, z); their roots carry
    all candidate dominant singularities of the algebraic series S at c = 1.
    """
    nu = Fraction(nu)

    def build(n: Fraction) -> UniPoly:
        return UniPoly([
            -16 * n + 4,
            36 * (3 * n - 1) * (n + 1) ** 2,
            81 * (n ** 2 - 1) ** 2 * (n + 1) ** 2,
        ])

    p1 = UniPoly([-3 * nu ** 2 + 8, 36 * (nu ** 2 - 1) ** 2])
    return p1, build(nu), build(-nu)


# ---------------------------------------------------------------------------
# Closed forms for the radius at c = 1
# ---------------------------------------------------------------------------

def rho_closed_form(nu, precision_bits: Optional[int] = None) -> Number:
    """Radius of convergence of the z-series at c = 1.

    Exact Fraction when nu >= 4 (rational) or sqrt(nu) is rational; otherwise
    an mpmath real at the requested precision.
    """
    nu = Fraction(nu)
    if nu <= 0:
        raise ValueError("nu must be positive")
    if nu >= 4:
        return (3 * nu ** 2 - 8) / (36 * (nu ** 2 - 1) ** 2)
    root = rational_sqrt(nu)
    if root is not None:
        return 2 * (1 + 2 * root) / (9 * (1 + root) ** 2 * (1 + nu) ** 2)
    bits = precision_bits or default_precision_bits()
    with mpmath.workprec(bits):
        r = mpmath.sqrt(to_mpf(nu))
        return 2 * (1 + 2 * r) / (9 * (1 + r) ** 2 * to_mpf((1 + nu) ** 2))


def s_at_rho_closed_form(nu, precision_bits: Optional[int] = None) -> Number:
    """Value of the algebraic series S at its radius, at c = 1."""
    nu = Fraction(nu)
    if nu <= 0:
        raise ValueError("nu must be positive")
    if nu >= 4:
        return Fraction(1, 3) / (nu ** 2 - 1)
    root = rational_sqrt(nu)
    if root is not None:
        return Fraction(1, 3) / ((root + 1) * (nu + 1))
    bits = precision_bits or default_precision_bits()
    with mpmath.workprec(bits):
        r = mpmath.sqrt(to_mpf(nu))
        return 1 / (3 * (r + 1) * to_mpf(nu + 1))


# ---------------------------------------------------------------------------
# Certified radius at a rational point
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularityReport:
    """Certified location of the dominant singularity at a parameter point.

    ``rho`` and ``mu = c * rho`` are midpoints of the certified intervals;
    when ``exact`` is True the intervals have zero width and the values are
    exact rationals.  ``exponent`` is the dominant singular exponent of S
    (1/2 generically, 1/3 at the critical point), or None if not requested.
    """

    rho: Fraction
    rho_interval: Tuple[Fraction, Fraction]
    mu: Fraction
    mu_interval: Tuple[Fraction, Fraction]
    s_at_rho: Fraction
    s_interval: Tuple[Fraction, Fraction]
    exact: bool
    exponent: Optional[Fraction] = None
    uniqueness_checked: bool = False
    warnings: Tuple[str, ...] = ()


def _root_interval_bound(params: IsingParams) -> Fraction:
    nu, c = params.nu, params.c
    if nu == 1:
        return Fraction(0)  # sentinel: caller substitutes a Cauchy bound
    return Fraction(1, 3) / (c ** 2 * abs(1 - nu ** 2))


def _poly_abs_bound(p: UniPoly, b: Fraction) -> Fraction:
    """Crude sup bound for |p| on [0, b]."""
    scale = max(b, Fraction(1))
    return sum((abs(c) * scale ** k for k, c in enumerate(p.coeffs)), Fraction(0))


def _reduced_radius_parts(params: IsingParams) -> Tuple[UniPoly, UniPoly]:
    """(P, Q) with z(s) = P(s)/Q(s) in lowest terms.

    Reduction matters at c = 1 for nu >= 4, where s* is a root of D and the
    unreduced s N(S)/D(S)^2 is a 0/0 there.
    """
    n_poly, d_poly = lagrangian_numer_denom(params, symbolic=False)
    num = UniPoly.variable() * n_poly
    den = d_poly * d_poly
    g = poly_gcd_field(num, den)
    if g.degree() > 0:
        num = num.exact_div(g)
        den = den.exact_div(g)
    return num, den


def _certify_rho(
    params: IsingParams, q2: UniPoly, lo: Fraction, hi: Fraction, tol: Fraction
) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction], bool]:
    """From an isolating interval for s*, certify an interval for rho.

    Returns (s_interval, rho_interval, exact).
    """
    num, den = _reduced_radius_parts(params)
    if lo == hi:
        z_exact = num.eval_scalar(lo) / den.eval_scalar(lo)
        return (lo, hi), (z_exact, z_exact), True
    num_d = num.derivative()
    den_d = den.derivative()
    chain = SturmChain(squarefree_part(q2))
    while True:
        den_lo = den.eval_scalar(lo)
        den_hi = den.eval_scalar(hi)
        if den_lo > 0 and den_hi > 0:
            width = hi - lo
            z_lo = num.eval_scalar(lo) / den_lo
            z_hi = num.eval_scalar(hi) / den_hi
            den_min = min(den_lo, den_hi)  # D^2 is decreasing on [0, s_D)
            lip = (
                _poly_abs_bound(num_d, hi) / den_min
                + _poly_abs_bound(num, hi) * _poly_abs_bound(den_d, hi) / den_min ** 2
            )
            lower = max(z_lo, z_hi)
            upper = lower + lip * width
            if upper - lower <= tol:
                return (lo, hi), (lower, upper), False
        # refine by one Sturm bisection step
        mid = (lo + hi) / 2
        if q2.eval_scalar(mid) == 0:
            z_exact = num.eval_scalar(mid) / den.eval_scalar(mid)
            return (mid, mid), (z_exact, z_exact), True
        if chain.count(lo, mid) == 1:
            hi = mid
        else:
            lo = mid


def _uniqueness_scan(
    params: IsingParams, rho_mid: Fraction, warnings: List[str]
) -> bool:
    """Heuristic check that no other discriminant root shares the modulus of rho.

    Roots strictly inside the disc belong to other sheets of the curve and
    are fine; a root at distance < 1e-6 in modulus (other than rho itself)
    leaves uniqueness unconfirmed.
    """
    try:
        disc = discriminant_in_z(params)
    except Exception as exc:  # pragma: no cover - defensive
        warnings.append("uniqueness scan skipped: %s" % exc)
        return False
    if disc.degree() < 1:
        warnings.append("uniqueness scan skipped: constant discriminant")
        return False
    sf = squarefree_part(disc)
    with mpmath.workprec(128):
        gap = mpmath.mpf(10) ** -6
        coeffs = [to_mpf(c) for c in reversed(sf.coeffs)]
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=120)
        except Exception as exc:
            warnings.append("uniqueness scan skipped: root solve failed (%s)" % exc)
            return False
        rho_x = to_mpf(rho_mid)
        for r in roots:
            if abs(r - rho_x) < gap:
                continue
            if abs(abs(r) - rho_x) < gap:
                warnings.append(
                    "another branch point has modulus within 1e-6 of rho; "
                    "dominant-singularity uniqueness not confirmed"
                )
                return False
    return True


def radius_numeric(
    params: IsingParams,
    tol: Fraction = Fraction(1, 10 ** 12),
    allow_far_field: bool = False,
    with_exponent: bool = True,
    scan_uniqueness: bool = True,
) -> SingularityReport:
    """Certified radius of convergence rho, mu = c rho, and S(rho).

    s* is the unique root of Q2 in (0, 1/(3 c^2 |1 - nu^2|)] (Cauchy bound at
    nu = 1), located by Sturm bisection; rho is the reduced rational function
    z(s) evaluated there, with an interval enclosure of width <= tol.  Points
    with |c - 1| > 1/4 are outside the validated region and require
    ``allow_far_field=True``, which records a warning instead.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    warnings: List[str] = []
    if abs(params.c - 1) > VALIDATED_C_HALF_WIDTH:
        if not allow_far_field:
            raise ValueError(
                "c is outside the validated neighborhood of 1; "
                "pass allow_far_field=True to proceed anyway"
            )
        warnings.append(
            "c outside the validated region |c-1| <= 1/4; results carry no guarantee"
        )
    q2 = characteristic_root_polynomial(params)
    bound = _root_interval_bound(params)
    if bound == 0:
        bound = cauchy_root_bound(q2)
    count = sturm_count(q2, Fraction(0), bound)
    if count != 1:
        raise NoRootInRange(
            "expected exactly one characteristic root in (0, %s], found %d"
            % (bound, count)
        )
    sf = squarefree_part(q2)
    if sf.eval_scalar(bound) == 0:
        lo = hi = bound
    else:
        lo, hi = refine_isolated_root(q2, Fraction(0), bound, bound / 2 ** 20)
    s_iv, rho_iv, exact = _certify_rho(params, q2, lo, hi, tol)
    rho_mid = (rho_iv[0] + rho_iv[1]) / 2 if not exact else rho_iv[0]
    s_mid = (s_iv[0] + s_iv[1]) / 2 if not exact else s_iv[0]
    mu_iv = (params.c * rho_iv[0], params.c * rho_iv[1])
    unique = _uniqueness_scan(params, rho_mid, warnings) if scan_uniqueness else False
    exponent = None
    if with_exponent:
        exponent = _dominant_exponent_at(params, s_iv, rho_iv, exact)
    return SingularityReport(
        rho=rho_mid,
        rho_interval=rho_iv,
        mu=params.c * rho_mid,
        mu_interval=mu_iv,
        s_at_rho=s_mid,
        s_interval=s_iv,
        exact=exact,
        exponent=exponent,
        uniqueness_checked=unique,
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# Newton-polygon Puiseux expansions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PuiseuxExpansion:
    """Initial terms of one branch y(Z) = sum coeff * Z^exponent at Z = 0.

    ``ramification`` is the lcm of the exponent denominators; ``exact`` marks
    a branch whose recorded terms solve the polynomial identically (a
    polynomial root found in finitely many steps).
    """

    center: Optional[Number]
    terms: Tuple[Tuple[Number, Fraction], ...]
    ramification: int
    exact: bool = False

    def leading_exponent(self) -> Optional[Fraction]:
        for _, e in self.terms:
            return e
        return None


SupportDict = Dict[Tuple[int, Fraction], object]


def _as_support(P) -> Tuple[SupportDict, bool]:
    """Normalize input to {(y_degree, z_exponent): coefficient}."""
    support: SupportDict = {}
    exact = True
    if isinstance(P, UniPoly):
        for i, ci in enumerate(P.coeffs):
            if isinstance(ci, UniPoly):
                for j, a in enumerate(ci.coeffs):
                    if not a == 0:
                        support[(i, Fraction(j))] = a
                        exact = exact and isinstance(a, (int, Fraction))
            elif not ci == 0:
                support[(i, Fraction(0))] = ci
                exact = exact and isinstance(ci, (int, Fraction))
    elif isinstance(P, dict):
        for (i, j), a in P.items():
            if not a == 0:
                support[(int(i), Fraction(j))] = a
                exact = exact and isinstance(a, (int, Fraction))
    else:
        raise TypeError("expected a UniPoly over UniPoly or a support dict")
    return support, exact


def _to_num(x):
    """Coerce exact scalars to mpmath under the ambient precision."""
    if isinstance(x, int):
        return mpmath.mpf(x)
    if isinstance(x, Fraction):
        return to_mpf(x)
    return x


def _num_abs(x) -> mpmath.mpf:
    return abs(_to_num(x))


def _clean_support(support: SupportDict, exact: bool, threshold) -> SupportDict:
    if exact:
        return {k: v for k, v in support.items() if v != 0}
    if not support:
        return {}
    top = max(_num_abs(v) for v in support.values())
    cut = top * threshold
    return {k: v for k, v in support.items() if _num_abs(v) > cut}


def _lower_hull(points: List[Tuple[int, Fraction]]) -> List[Tuple[int, Fraction]]:
    """Lower convex hull of (i, e) points, increasing in i."""
    pts = sorted(points)
    best: Dict[int, Fraction] = {}
    for i, e in pts:
        if i not in best or e < best[i]:
            best[i] = e
    pts = sorted(best.items())
    hull: List[Tuple[int, Fraction]] = []
    for p in pts:
        while len(hull) >= 2:
            (i1, e1), (i2, e2) = hull[-2], hull[-1]
            # drop middle point if it lies on or above the chord
            if (e2 - e1) * (p[0] - i1) >= (p[1] - e1) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _edge_roots(chi: List, exact: bool, precision_bits: int):
    """Distinct nonzero roots of the edge polynomial (list indexed by power).

    Exact rational roots are returned as Fractions whenever verification
    succeeds; everything else comes back as mpmath numbers.
    """
    while chi and (chi[-1] == 0 if exact else _num_abs(chi[-1]) == 0):
        chi.pop()
    roots: List[object] = []
    if exact:
        poly = UniPoly([Fraction(c) for c in chi])
        with mpmath.workprec(precision_bits):
            approx = mpmath.polyroots(
                [to_mpf(Fraction(c)) for c in reversed(chi)],
                maxsteps=200, extraprec=precision_bits,
            )
        for r in approx:
            if abs(r) == 0:
                continue
            if abs(mpmath.im(r)) < mpmath.mpf(2) ** (-precision_bits // 2):
                guess = Fraction(str(mpmath.re(r))).limit_denominator(10 ** 12)
                if poly.eval_scalar(guess) == 0 and guess != 0:
                    if guess not in roots:
                        roots.append(guess)
                    continue
            roots.append(r)
    else:
        with mpmath.workprec(precision_bits):
            approx = mpmath.polyroots(
                [_to_num(c) for c in reversed(chi)],
                maxsteps=200, extraprec=precision_bits,
            )
        roots = [r for r in approx if _num_abs(r) > 0]
    # collapse duplicates (multiple roots reported separately)
    out: List[object] = []
    for r in roots:
        dup = False
        for s in out:
            if isinstance(r, Fraction) and isinstance(s, Fraction):
                dup = r == s
            else:
                with mpmath.workprec(precision_bits):
                    dup = bool(_num_abs(_to_num(r) - _to_num(s))
                               < mpmath.mpf(2) ** (-precision_bits // 3))
            if dup:
                break
        if not dup:
            out.append(r)
    return out


def _substitute_branch(
    support: SupportDict, mu: Fraction, c_root, exact: bool
) -> SupportDict:
    """Support of P(Z, Z^mu (c + Y)) with the minimal z-exponent subtracted."""
    new: SupportDict = {}
    c_val = c_root if exact else _to_num(c_root)
    powers: List[object] = [1 if exact else mpmath.mpf(1)]
    max_i = max(i for i, _ in support)
    for _ in range(max_i):
        powers.append(powers[-1] * c_val)
    for (i, e), a in support.items():
        for k in range(i + 1):
            coef = a * comb(i, k) * powers[i - k]
            key = (k, e + i * mu)
            if key in new:
                new[key] = new[key] + coef
            else:
                new[key] = coef
    new = {k: v for k, v in new.items() if (v != 0 if exact else _num_abs(v) > 0)}
    if not new:
        return new
    shift = min(e for _, e in new)
    return {(i, e - shift): v for (i, e), v in new.items()}


def _expand_support(
    support: SupportDict,
    exact: bool,
    terms_left: int,
    precision_bits: int,
    acc: List[Tuple[object, Fraction]],
    base: Fraction,
    results: List[Tuple[List[Tuple[object, Fraction]], bool]],
):
    threshold = mpmath.mpf(2) ** (-(precision_bits // 2))
    support = _clean_support(support, exact, threshold)
    if not support:
        # previous substitution solved the polynomial identically
        results.append((list(acc), True))
        return
    recorded_here = False
    i_min = min(i for i, _ in support)
    if i_min > 0:
        # Y^i_min factors out: the accumulated terms are an exact branch
        results.append((list(acc), True))
        recorded_here = True
        support = {(i - i_min, e): v for (i, e), v in support.items()}
        support = _clean_support(support, exact, threshold)
        if all(i == 0 for i, _ in support):
            return
    if all(i == 0 for i, _ in support):
        raise DegenerateBranch(
            "no Y-dependence left: the polynomial has a Y-independent factor"
        )
    if (0, Fraction(0)) in support:
        if not acc and not recorded_here:
            raise DegenerateBranch(
                "polynomial does not vanish at the origin; shift it first"
            )
        # no further branch passes through the origin of this node
        return
    if terms_left == 0:
        results.append((list(acc), False))
        return
    hull = _lower_hull(list(support.keys()))
    found_edge = False
    for (i1, e1), (i2, e2) in zip(hull, hull[1:]):
        if e1 <= e2:
            continue  # only strictly falling edges give y -> 0 branches
        found_edge = True
        mu = Fraction(e1 - e2, i2 - i1)
        chi: List[object] = [0] * (i2 - i1 + 1)
        for (i, e), a in support.items():
            # on the edge: e = e1 - mu (i - i1)
            if i1 <= i <= i2 and e == e1 - mu * (i - i1):
                chi[i - i1] = chi[i - i1] + a
        for c_root in _edge_roots(chi, exact, precision_bits):
            branch_exact = exact and isinstance(c_root, Fraction)
            if exact and not branch_exact:
                with mpmath.workprec(precision_bits):
                    sub_support = {k: _to_num(v) for k, v in support.items()}
            else:
                sub_support = support
            with mpmath.workprec(precision_bits):
                new_support = _substitute_branch(
                    sub_support, mu, c_root, branch_exact
                )
                _expand_support(
                    new_support, branch_exact, terms_left - 1, precision_bits,
                    acc + [(c_root, base + mu)], base + mu, results,
                )
    if not found_edge:
        raise DegenerateBranch("no admissible Newton-polygon slope at this node")


def newton_polygon_expand(
    P, max_terms: int = 3, precision_bits: Optional[int] = None,
    center: Optional[Number] = None,
) -> List[PuiseuxExpansion]:
    """All Puiseux branches y(Z) with y(0) = 0 of a bivariate polynomial.

    ``P`` is either a UniPoly in Y whose coefficients are UniPoly in Z, or a
    dict {(y_degree, z_degree): coefficient}.  Exact rational coefficients
    keep exponents and rational branch coefficients exact; irrational branch
    coefficients continue in mpmath arithmetic at ``precision_bits``.  Every
    returned expansion is verified by back-substitution.
    """
    bits = precision_bits or default_precision_bits()
    support, exact = _as_support(P)
    if not support:
        raise ValueError("zero polynomial has no Puiseux branches")
    results: List[Tuple[List[Tuple[object, Fraction]], bool]] = []
    _expand_support(support, exact, max_terms, bits, [], Fraction(0), results)
    expansions = []
    for terms, is_exact in results:
        denoms = [e.denominator for _, e in terms] or [1]
        ram = 1
        for d in denoms:
            ram = lcm(ram, d)
        exp = PuiseuxExpansion(
            center=center,
            terms=tuple((c, e) for c, e in terms),
            ramification=ram,
            exact=is_exact and all(isinstance(c, (int, Fraction))
                                   for c, _ in terms),
        )
        _verify_expansion(support, exact, exp, bits)
        expansions.append(exp)
    return expansions


def _verify_expansion(
    support: SupportDict, exact: bool, exp: PuiseuxExpansion, bits: int
) -> None:
    """Back-substitute the branch; residual must start above the last exponent."""
    if not exp.terms:
        return
    with mpmath.workprec(bits):
        # represent y(Z) as {exponent: coeff} and P(Z, y) as the same
        y: Dict[Fraction, object] = {}
        for c, e in exp.terms:
            y[e] = y.get(e, 0) + c
        last = exp.terms[-1][1]
        residual: Dict[Fraction, object] = {}
        for (i, e), a in support.items():
            # expand a * y^i * Z^e, truncating exponents beyond last + 1
            acc: Dict[Fraction, object] = {Fraction(0): a}
            for _ in range(i):
                nxt: Dict[Fraction, object] = {}
                for e1, c1 in acc.items():
                    for e2, c2 in y.items():
                        ee = e1 + e2
                        if ee > last * (max(i for i, _ in support) + 1) + 1:
                            continue
                        nxt[ee] = nxt.get(ee, 0) + c1 * c2
                acc = nxt
            for e1, c1 in acc.items():
                residual[e1 + e] = residual.get(e1 + e, 0) + c1
        if exact and exp.exact:
            bad = {e: c for e, c in residual.items() if c != 0 and e <= last}
        else:
            vals = [_num_abs(c) for c in residual.values()]
            top = max(vals) if vals else mpmath.mpf(1)
            top = max(top, mpmath.mpf(1))
            tolerance = top * mpmath.mpf(2) ** (-(bits // 3))
            bad = {
                e: c for e, c in residual.items()
                if e <= last and _num_abs(c) > tolerance
            }
        if bad:
            raise PrecisionExhausted(
                "Puiseux branch failed its back-substitution self-check "
                "(surviving exponents: %s)" % sorted(bad)
            )


# ---------------------------------------------------------------------------
# Dominant exponent
# ---------------------------------------------------------------------------

def _shifted_cancelling_support(
    params: IsingParams, s_point: Fraction, rho_point: Fraction
) -> Dict[Tuple[int, int], Fraction]:
    """Exact support of C(rho - Z, s* - Y) for the squarefree cancelling poly."""
    c_sf = cancelling_polynomial_squarefree(params)
    out: Dict[Tuple[int, int], Fraction] = {}
    for k, qk in enumerate(c_sf.coeffs):
        # qk(z) is z-linear at most: qk(rho - Z) = qk(rho) - qk'(rho) Z ...
        sub = [qk.eval_scalar(rho_point)]
        work = qk
        fact = 1
        j = 1
        while work.degree() >= 1:
            work = work.derivative()
            fact *= j
            sub.append(Fraction(-1) ** j * work.eval_scalar(rho_point) / fact)
            j += 1
        # (s* - Y)^k
        for a in range(k + 1):
            coef_y = comb(k, a) * s_point ** (k - a) * Fraction(-1) ** a
            for zdeg, cz in enumerate(sub):
                if cz == 0 or coef_y == 0:
                    continue
                key = (a, zdeg)
                out[key] = out.get(key, Fraction(0)) + coef_y * cz
    return {k: v for k, v in out.items() if v != 0}


def _smallest_noninteger_exponent(
    expansions: Sequence[PuiseuxExpansion],
) -> Optional[Fraction]:
    best: Optional[Fraction] = None
    for exp in expansions:
        for _, e in exp.terms:
            if e.denominator != 1:
                if best is None or e < best:
                    best = e
                break
    return best


def _dominant_exponent_at(
    params: IsingParams,
    s_iv: Tuple[Fraction, Fraction],
    rho_iv: Tuple[Fraction, Fraction],
    exact: bool,
    precision_bits: Optional[int] = None,
) -> Fraction:
    bits = precision_bits or params.precision_bits or default_precision_bits()

    if exact:
        support = _shifted_cancelling_support(params, s_iv[0], rho_iv[0])
        expansions = newton_polygon_expand(
            support, max_terms=2, precision_bits=bits, center=rho_iv[0]
        )
        exponent = _smallest_noninteger_exponent(expansions)
        if exponent is None:
            raise DegenerateBranch(
                "no fractional branch exponent at the exact critical point"
            )
        return exponent

    def attempt(bits_run: int) -> Fraction:
        q2 = characteristic_root_polynomial(params)
        width = Fraction(1, 2 ** (3 * bits_run // 4))
        lo, hi = refine_isolated_root(q2, s_iv[0], s_iv[1], width)
        s0 = (lo + hi) / 2
        num, den = _reduced_radius_parts(params)
        rho0 = num.eval_scalar(s0) / den.eval_scalar(s0)
        support = _shifted_cancelling_support(params, s0, rho0)
        with mpmath.workprec(bits_run):
            num_support = {
                k: to_mpf(v) for k, v in support.items()
            }
            expansions = newton_polygon_expand(
                num_support, max_terms=1, precision_bits=bits_run,
                center=to_mpf(rho0),
            )
        exponent = _smallest_noninteger_exponent(expansions)
        if exponent is None:
            raise DegenerateBranch("no fractional branch exponent found")
        return exponent

    first = attempt(bits)
    second = attempt(2 * bits)
    if first != second:
        raise PrecisionExhausted(
            "dominant exponent disagrees between %d and %d bits" % (bits, 2 * bits)
        )
    return first


def dominant_exponent(params: IsingParams) -> Fraction:
    """The singular exponent of S at its radius: 1/2 generically, 1/3 at (4,1)."""
    report = radius_numeric(params, with_exponent=True, scan_uniqueness=False)
    return report.exponent


def dominant_expansions(
    params: IsingParams,
    max_terms: int = 3,
    precision_bits: Optional[int] = None,
) -> Tuple[SingularityReport, List[PuiseuxExpansion]]:
    """Puiseux branches of the cancelling polynomial at the dominant singularity.

    At exact endpoint singularities the branches are exact; otherwise the
    critical point is refined to width 2^(-3 bits/4), placed exactly on the
    curve, and expanded numerically at the working precision.
    """
    report = radius_numeric(params, with_exponent=False, scan_uniqueness=False)
    bits = precision_bits or params.precision_bits or default_precision_bits()
    if report.exact:
        support = _shifted_cancelling_support(params, report.s_at_rho, report.rho)
        expansions = newton_polygon_expand(
            support, max_terms=max_terms, precision_bits=bits, center=report.rho
        )
        return report, expansions
    q2 = characteristic_root_polynomial(params)
    width = Fraction(1, 2 ** (3 * bits // 4))
    lo, hi = refine_isolated_root(q2, report.s_interval[0], report.s_interval[1],
                                  width)
    s0 = (lo + hi) / 2
    num, den = _reduced_radius_parts(params)
    rho0 = num.eval_scalar(s0) / den.eval_scalar(s0)
    support = _shifted_cancelling_support(params, s0, rho0)
    with mpmath.workprec(bits):
        num_support = {k: to_mpf(v) for k, v in support.items()}
        expansions = newton_polygon_expand(
            num_support, max_terms=max_terms, precision_bits=bits,
            center=to_mpf(rho0),
        )
    return report, expansions
