"""Catalan's constant and the lemniscate family at arbitrary precision.

Production routines:

* Catalan's constant from ``G = (pi/8) ln(2 + sqrt 3) + (3/8) S`` where
  ``S = sum 1 / (C(2n, n) (2n+1)**2)`` is summed by binary splitting.
* The lemniscate family from one AGM: with ``M = AGM(1, sqrt 2)``, Gauss's
  constant is ``1/M`` and the lemniscate arc length is ``s = 2 pi / M``.

Independent oracles (defining series, accelerated defining series and a
tanh-sinh quadrature of the lemniscate integral) live next to them for
cross-checking.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List

import mpmath
from gmpy2 import mpz

from .errors import DomainError
from .hpcore import (
    HPNumber,
    SeriesSpec,
    binary_split,
    guard_bits,
    hp_agm,
    hp_ln,
    hp_pi,
    hp_sqrt,
)

LOG2_10 = math.log2(10)

# bits carried beyond the requested decimal digits so that digit emission
# (which wants 64 spare bits) never needs a recompute in normal use
DIGIT_MARGIN_BITS = 64


class ConstantId(enum.Enum):
    CATALAN = "catalan"
    LEMNISCATE_ARC = "lemniscate-arc"
    LEMNISCATE_L = "lemniscate-l"
    LEMNISCATE_L1 = "l1"
    LEMNISCATE_L2 = "l2"
    GAUSS_CONSTANT = "gauss"
    GAMMA_QUARTER = "gamma-quarter"
    PI = "pi"


@dataclass(frozen=True)
class ConstantValue:
    id: ConstantId
    value: HPNumber
    requested_digits: int
    method: str


def bits_for_digits(digits: int) -> int:
    """Binary precision used for a request of ``digits`` decimal digits."""
    if digits < 1:
        raise ValueError("digits must be positive")
    return math.ceil(digits * LOG2_10) + DIGIT_MARGIN_BITS


# Catalan's constant

def catalan_series_spec(n_terms: int) -> SeriesSpec:
    """sum_{n < n_terms} 1 / (C(2n, n) (2n+1)**2) as a term-ratio series.

    term(n+1)/term(n) = (n+1)(2n+1) / (2 (2n+3)**2)
    """
    return SeriesSpec(
        p=lambda n: (n + 1) * (2 * n + 1),
        q=lambda n: 2 * (2 * n + 3) ** 2,
        first_term=1,
        start=0,
        stop=n_terms,
    )


def _catalan_fixed(prec_bits: int) -> HPNumber:
    g = guard_bits(prec_bits)
    wp = prec_bits + g + 8
    # term(n) < 4**-n, so wp/2 + 4 terms leave a tail below 2**-(wp+6)
    n_terms = wp // 2 + 4
    pi = hp_pi(wp).to_fixed(wp)
    ln = hp_ln(hp_sqrt(3, wp) + 2, wp).to_fixed(wp)
    s = binary_split(catalan_series_spec(n_terms), wp).to_fixed(wp)
    g_fixed = ((pi * ln >> wp) + 3 * s) >> 3
    return HPNumber.from_fixed(g_fixed, wp).truncate(prec_bits + g)


def catalan(digits: int, *, verify: bool | None = None) -> ConstantValue:
    """Catalan's constant correct to at least ``digits`` decimal digits.

    From 1000 digits upward (or when ``verify`` is true) the value is
    recomputed with 64 more bits and the two results must agree to the
    requested precision.
    """
    prec = bits_for_digits(digits)
    value = _catalan_fixed(prec)
    if verify is None:
        verify = digits >= 1000
    if verify:
        check = _catalan_fixed(prec + 64)
        if abs(value - check) > HPNumber.from_fixed(1, prec):
            raise ArithmeticError("Catalan recompute at higher precision disagrees")
    return ConstantValue(ConstantId.CATALAN, value, digits, "ramanujan-binary-split+agm-log")


def catalan_defining_partial(n_terms: int, prec_bits: int = 128) -> HPNumber:
    """Partial sum of sum_{n < n_terms} (-1)**n / (2n+1)**2.

    Accumulated in fixed point with enough extra bits that the result is the
    exact partial sum truncated to ``prec_bits``, give or take one unit.
    The alternating-series tail is below 1 / (2 n_terms + 1)**2.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    wp = prec_bits + n_terms.bit_length() + 4
    one = mpz(1) << wp
    total = mpz(0)
    for n in range(n_terms):
        t = one // ((2 * n + 1) ** 2)
        total = total - t if n & 1 else total + t
    return HPNumber.from_fixed(total, wp).truncate(prec_bits)


def catalan_defining_accelerated(digits: int) -> tuple[Fraction, Fraction]:
    """Sum the defining alternating series with Cohen-Villegas-Zagier weights.

    The terms 1/(2n+1)**2 are moments of a positive weight on [0, 1], so the
    weighted partial sum of n terms is within 2/(3+sqrt 8)**n of the limit.
    Returns ``(estimate, error_bound)`` as exact rationals.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    n = math.ceil((digits + 1) / math.log10(3 + math.sqrt(8))) + 1
    # ((3+sqrt8)**n + (3-sqrt8)**n) is an integer: trace recurrence
    x0, x1 = 2, 6
    for _ in range(n - 1):
        x0, x1 = x1, 6 * x1 - x0
    d = Fraction(x1 if n >= 1 else x0, 2)
    b = Fraction(-1)
    c = -d
    s = Fraction(0)
    for k in range(n):
        c = b - c
        s += c * Fraction(1, (2 * k + 1) ** 2)
        b = b * (k + n) * (k - n) / (Fraction(2 * k + 1, 2) * (k + 1))
    bound = Fraction(2) / Fraction(x1 - 1, 1)  # 2/(3+sqrt8)**n < 2/(trace - 1)
    return s / d, bound


# lemniscate family

def _lemniscate_values(prec_bits: int) -> Dict[ConstantId, HPNumber]:
    g = guard_bits(prec_bits)
    out = prec_bits + g
    wp = prec_bits + g + 8
    agm = hp_agm(1, hp_sqrt(2, wp), wp)
    pi = hp_pi(wp)
    two_pi = pi * 2
    s = two_pi.div(agm, out)
    gauss = HPNumber.from_int(1).div(agm, out)
    lem = s.half()
    gamma = hp_sqrt(s * hp_sqrt(two_pi, wp), prec_bits)
    return {
        ConstantId.LEMNISCATE_ARC: s,
        ConstantId.LEMNISCATE_L: lem,
        ConstantId.LEMNISCATE_L1: lem.half(),
        ConstantId.LEMNISCATE_L2: agm.truncate(out).half(),
        ConstantId.GAUSS_CONSTANT: gauss,
        ConstantId.GAMMA_QUARTER: gamma,
    }


_LEMNISCATE_METHODS = {
    ConstantId.LEMNISCATE_ARC: "2pi/agm(1,sqrt2)",
    ConstantId.LEMNISCATE_L: "arc/2",
    ConstantId.LEMNISCATE_L1: "arc/4",
    ConstantId.LEMNISCATE_L2: "agm(1,sqrt2)/2",
    ConstantId.GAUSS_CONSTANT: "1/agm(1,sqrt2)",
    ConstantId.GAMMA_QUARTER: "sqrt(arc*sqrt(2pi))",
}


def lemniscate_family(digits: int) -> List[ConstantValue]:
    """s, L, L1, L2, Gauss's constant and Gamma(1/4), in that order.

    L = s/2 and L1 = L/2 are exact halvings of the computed s;
    Gamma(1/4) is only ever derived from s.
    """
    values = _lemniscate_values(bits_for_digits(digits))
    return [
        ConstantValue(cid, v, digits, _LEMNISCATE_METHODS[cid]) for cid, v in values.items()
    ]


def lemniscate_integral_oracle(digits: int) -> HPNumber:
    """Integral of 1/sqrt(1 - t**4) over [0, 1] by tanh-sinh quadrature.

    Low-precision oracle only (``digits <= 30``).  The complement 1 - t is
    formed directly from the node parameter so the endpoint singularity at
    t = 1 never suffers cancellation.  The value equals s/4.
    """
    if not 1 <= digits <= 30:
        raise DomainError("lemniscate_integral_oracle supports 1..30 digits")
    dps = digits + 15
    with mpmath.workdps(dps):
        tol = mpmath.mpf(10) ** -(digits + 5)
        tiny = mpmath.mpf(10) ** -(dps + 5)
        half_pi = mpmath.pi / 2

        def integrand_weight(u):
            y = half_pi * mpmath.sinh(u)
            # x = tanh(y) on [-1, 1]; t = (1 + x)/2
            one_minus_x = 2 / (mpmath.exp(2 * y) + 1)
            one_minus_t = one_minus_x / 2
            t = 1 - one_minus_t
            w = half_pi * mpmath.cosh(u) / mpmath.cosh(y) ** 2 / 2
            return w / mpmath.sqrt(one_minus_t * (1 + t) * (1 + t * t))

        prev = None
        h = mpmath.mpf(1)
        for _level in range(12):
            total = integrand_weight(mpmath.mpf(0))
            k = 1
            while True:
                a = integrand_weight(k * h)
                b = integrand_weight(-k * h)
                total += a + b
                if abs(a) + abs(b) < tiny:
                    break
                k += 1
            est = total * h
            if prev is not None and abs(est - prev) < tol:
                break
            prev = est
            h /= 2
        else:
            raise ArithmeticError("tanh-sinh quadrature did not converge")
        bits = math.ceil((digits + 10) * LOG2_10)
        mag = int(mpmath.floor(est * mpmath.mpf(2) ** bits))
    return HPNumber.from_fixed(mag, bits)


def compute_constant(cid: ConstantId, digits: int) -> ConstantValue:
    """Evaluate any supported constant to ``digits`` decimal digits."""
    cid = ConstantId(cid)
    if cid is ConstantId.CATALAN:
        return catalan(digits)
    if cid is ConstantId.PI:
        prec = bits_for_digits(digits)
        return ConstantValue(cid, hp_pi(prec), digits, "brent-salamin")
    for cv in lemniscate_family(digits):
        if cv.id is cid:
            return cv
    raise ValueError(f"unknown constant {cid!r}")
