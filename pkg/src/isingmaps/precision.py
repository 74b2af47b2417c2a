"""Working-precision helpers for the numeric (mpmath) code paths.

The package follows a two-precision audit convention: any numeric pipeline
that feeds user-facing results is run at the requested precision p and again
at 2p bits, and a value is accepted only when the two runs agree to p/2 bits.
"""
from __future__ import annotations

import os
from fractions import Fraction

from mpmath import mp, mpf, workprec

from .errors import PrecisionExhausted

DEFAULT_PRECISION_BITS = 192
PRECISION_ENV_VAR = "ISINGMAPS_PRECISION"


def default_precision_bits() -> int:
    """Default working precision in bits, overridable via the environment."""
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return DEFAULT_PRECISION_BITS
    bits = int(raw)
    if bits < 8:
        raise ValueError("precision must be at least 8 bits")
    return bits


def to_mpf(x):
    """Convert an exact rational (or int/float/mpf) to mpf at the ambient
    precision."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    return mpf(x)


def agree_to_bits(a, b, bits: int) -> bool:
    """True when |a - b| <= 2^-bits * max(1, |a|, |b|)."""
    scale = max(mpf(1), abs(a), abs(b))
    return abs(a - b) <= scale * mpf(2) ** (-bits)


def audited(run, precision_bits: int, *, agreement_bits: int | None = None):
    """Run ``run(bits)`` at p and 2p bits and compare the results.

    ``run`` must return either a single mpf or a sequence of mpfs.  Values are
    accepted if every entry agrees to ``agreement_bits`` (default p/2) bits;
    otherwise PrecisionExhausted is raised.  The values from the p-bit run are
    returned, so the result carries exactly the requested precision.
    """
    need = agreement_bits if agreement_bits is not None else precision_bits // 2
    with workprec(precision_bits):
        lo = run(precision_bits)
    with workprec(2 * precision_bits):
        hi = run(2 * precision_bits)
    lo_seq = lo if isinstance(lo, (list, tuple)) else [lo]
    hi_seq = hi if isinstance(hi, (list, tuple)) else [hi]
    if len(lo_seq) != len(hi_seq):
        raise PrecisionExhausted("audit runs returned different shapes")
    with workprec(2 * precision_bits):
        for x, y in zip(lo_seq, hi_seq):
            if not agree_to_bits(x, y, need):
                raise PrecisionExhausted(
                    "results at %d and %d bits disagree beyond %d bits"
                    % (precision_bits, 2 * precision_bits, need)
                )
    return lo
