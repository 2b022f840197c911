"""Fixed-point arbitrary-precision kernels.

Every real-valued quantity in the package is an :class:`HPNumber`: a sign, a
nonnegative integer magnitude and a count of binary fractional bits.  The
kernels below (square root, AGM, pi, natural log, binary splitting) all work
on plain scaled integers internally and wrap the result at the boundary.

Big-integer multiplication and division are delegated to GMP through gmpy2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Callable, Optional, Union

from gmpy2 import mpz

from .errors import DomainError, MalformedSeriesError

__all__ = [
    "HPNumber",
    "SeriesSpec",
    "guard_bits",
    "hp_sqrt",
    "hp_agm",
    "hp_pi",
    "hp_ln",
    "binary_split",
]

Rational = Union[int, Fraction]


def guard_bits(prec_bits: int) -> int:
    """Extra bits carried past ``prec_bits``: 32 + ceil(log2(prec_bits))."""
    if prec_bits < 1:
        raise ValueError("prec_bits must be positive")
    return 32 + (prec_bits - 1).bit_length()


def _shift(m, n: int):
    """m * 2**n, truncated toward zero when n < 0."""
    if n >= 0:
        return m << n
    if m >= 0:
        return m >> -n
    return -((-m) >> -n)


@total_ordering
@dataclass(frozen=True)
class HPNumber:
    """Binary fixed-point real ``sign * magnitude * 2**-scale``.

    ``exact`` marks values that are the intended number itself rather than an
    approximation of something else (integers, dyadic fractions, values parsed
    from a digit string).  Digit emission skips its ambiguity check for them.
    """

    sign: int
    magnitude: mpz
    scale: int
    exact: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.magnitude < 0:
            raise ValueError("magnitude must be nonnegative")
        if (self.magnitude == 0) != (self.sign == 0):
            raise ValueError("magnitude is zero iff sign is zero")
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")
        object.__setattr__(self, "magnitude", mpz(self.magnitude))

    # construction

    @classmethod
    def from_fixed(cls, m, scale: int, exact: bool = False) -> "HPNumber":
        """Wrap the signed integer ``m`` as ``m * 2**-scale``."""
        m = mpz(m)
        sign = (m > 0) - (m < 0)
        return cls(sign, abs(m), scale, exact)

    @classmethod
    def from_int(cls, n: int, scale: int = 0) -> "HPNumber":
        return cls.from_fixed(mpz(n) << scale, scale, exact=True)

    @classmethod
    def from_fraction(cls, q: Rational, scale: int) -> "HPNumber":
        """Truncate the rational ``q`` toward zero at ``scale`` bits."""
        q = Fraction(q)
        num, den = abs(q.numerator), q.denominator
        m, r = divmod(mpz(num) << scale, den)
        if q < 0:
            m = -m
        return cls.from_fixed(m, scale, exact=(r == 0))

    @classmethod
    def zero(cls, scale: int = 0) -> "HPNumber":
        return cls(0, mpz(0), scale, True)

    # views

    @property
    def fixed(self) -> mpz:
        """Signed integer mantissa at this number's own scale."""
        return self.sign * self.magnitude

    def to_fixed(self, bits: int) -> mpz:
        """Signed mantissa rescaled to ``bits`` fractional bits (truncating)."""
        return _shift(self.fixed, bits - self.scale)

    def truncate(self, bits: int) -> "HPNumber":
        """Same value carried at ``bits`` fractional bits, truncated toward zero."""
        if bits >= self.scale:
            return HPNumber(self.sign, self.magnitude << (bits - self.scale), bits, self.exact)
        m = self.magnitude >> (self.scale - bits)
        exact = self.exact and (m << (self.scale - bits)) == self.magnitude
        return HPNumber.from_fixed(self.sign * m, bits, exact)

    def to_fraction(self) -> Fraction:
        return Fraction(int(self.fixed), 1 << self.scale)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __repr__(self) -> str:
        return f"HPNumber({float(self)!r}, scale={self.scale})"

    # exact arithmetic

    def _coerce(self, other) -> "HPNumber":
        if isinstance(other, HPNumber):
            return other
        if isinstance(other, int):
            return HPNumber.from_int(other)
        return NotImplemented

    def __neg__(self) -> "HPNumber":
        return HPNumber(-self.sign, self.magnitude, self.scale, self.exact)

    def __abs__(self) -> "HPNumber":
        return HPNumber(abs(self.sign), self.magnitude, self.scale, self.exact)

    def __add__(self, other) -> "HPNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        s = max(self.scale, other.scale)
        return HPNumber.from_fixed(
            self.to_fixed(s) + other.to_fixed(s), s, self.exact and other.exact
        )

    __radd__ = __add__

    def __sub__(self, other) -> "HPNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "HPNumber":
        return (-self) + other

    def __mul__(self, other) -> "HPNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return HPNumber.from_fixed(
            self.fixed * other.fixed, self.scale + other.scale, self.exact and other.exact
        )

    __rmul__ = __mul__

    def half(self) -> "HPNumber":
        """Exactly half of this value (one more fractional bit, same mantissa)."""
        return HPNumber(self.sign, self.magnitude, self.scale + 1, self.exact)

    def div(self, other, bits: int) -> "HPNumber":
        """Quotient truncated toward zero at ``bits`` fractional bits."""
        other = self._coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by zero HPNumber")
        num = self.magnitude << (bits + other.scale)
        den = other.magnitude << self.scale
        m, r = divmod(num, den)
        return HPNumber.from_fixed(
            self.sign * other.sign * m, bits, self.exact and other.exact and r == 0
        )

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        s = max(self.scale, other.scale)
        a, b = self.to_fixed(s), other.to_fixed(s)
        return (a > b) - (a < b)

    def __eq__(self, other):
        if not isinstance(other, (HPNumber, int)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        if not isinstance(other, (HPNumber, int)):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        m, s = self.magnitude, self.scale
        while s and not m & 1:
            m >>= 1
            s -= 1
        return hash((self.sign, int(m), s))


def _as_hp(x) -> HPNumber:
    if isinstance(x, HPNumber):
        return x
    if isinstance(x, int):
        return HPNumber.from_int(x)
    raise TypeError(f"expected HPNumber or int, got {type(x).__name__}")


# square root

def _isqrt(n: mpz) -> mpz:
    """floor(sqrt(n)) by Newton iteration with precision doubling.

    The recursion bottoms out at 64 significant bits, seeded from a
    hardware float square root.
    """
    n = mpz(n)
    if n < 0:
        raise DomainError("square root of a negative number")
    b = n.bit_length()
    if b <= 64:
        r = mpz(int(math.sqrt(float(n))))
    else:
        e = b // 4 - 1
        r = _isqrt(n >> (2 * e)) << e
        r = (r + n // r) >> 1
    rem = n - r * r
    while rem < 0:
        r -= 1
        rem += 2 * r + 1
    while rem > 2 * r:
        rem -= 2 * r + 1
        r += 1
    return r


def hp_sqrt(x, prec_bits: int) -> HPNumber:
    """Square root of ``x`` with at least ``prec_bits`` correct bits."""
    x = _as_hp(x)
    if x.sign < 0:
        raise DomainError("hp_sqrt of a negative number")
    out = prec_bits + guard_bits(prec_bits)
    shift = 2 * out - x.scale
    n = _shift(x.fixed, shift)
    r = _isqrt(n)
    exact = x.exact and r * r == n and (shift >= 0 or _shift(n, -shift) == x.fixed)
    return HPNumber.from_fixed(r, out, exact)


# arithmetic-geometric mean

def _agm_fixed(a: mpz, b: mpz, wp: int, tol: mpz) -> mpz:
    """AGM of two positive fixed-point integers at ``wp`` bits."""
    limit = 4 * wp.bit_length() + 64
    for _ in range(limit):
        if abs(a - b) <= tol:
            return (a + b) >> 1
        a, b = (a + b) >> 1, _isqrt(a * b)
    raise ArithmeticError("AGM iteration failed to converge")


def hp_agm(a, b, prec_bits: int) -> HPNumber:
    """Arithmetic-geometric mean of two positive numbers.

    Iterates a <- (a+b)/2, b <- sqrt(ab) at ``prec_bits + 2*guard`` bits
    until the pair agrees within 2**-(prec_bits + guard).
    """
    a, b = _as_hp(a), _as_hp(b)
    if a.sign <= 0 or b.sign <= 0:
        raise DomainError("hp_agm requires positive arguments")
    g = guard_bits(prec_bits)
    wp = prec_bits + 2 * g
    A, B = a.to_fixed(wp), b.to_fixed(wp)
    if A <= 0 or B <= 0:
        raise DomainError("hp_agm argument underflows the working precision")
    m = _agm_fixed(A, B, wp, mpz(1) << (wp - prec_bits - g))
    return HPNumber.from_fixed(m, wp, exact=a.exact and b.exact and A == B).truncate(prec_bits + g)


# pi

@lru_cache(maxsize=16)
def _pi_fixed(wp: int) -> mpz:
    """Brent-Salamin (Gauss-Legendre) pi, as floor-ish(pi * 2**wp)."""
    extra = 2 * wp.bit_length() + 16
    w = wp + extra
    one = mpz(1) << w
    a = one
    b = _isqrt(one << (w - 1))  # sqrt(1/2)
    t = one >> 2
    k = 0
    tol = mpz(1) << (w // 2 + 4)
    while True:
        an = (a + b) >> 1
        d = a - an
        t -= (d * d >> w) << k
        b = _isqrt(a * b)
        a = an
        k += 1
        if abs(a - b) <= tol:
            break
        if k > 4 * w.bit_length() + 64:
            raise ArithmeticError("pi iteration failed to converge")
    s = a + b
    return (s * s // (4 * t)) >> extra


def hp_pi(prec_bits: int) -> HPNumber:
    """pi to within 2**-prec_bits, via the AGM (Brent-Salamin)."""
    if prec_bits < 8:
        raise ValueError("hp_pi requires prec_bits >= 8")
    g = guard_bits(prec_bits)
    return HPNumber.from_fixed(_pi_fixed(prec_bits + g), prec_bits + g)


# natural logarithm

def _ln_large_fixed(mag: mpz, exp2: int, wp: int) -> mpz:
    """ln(s) at ``wp`` bits for s = mag * 2**exp2, assuming s > 2**(wp/2).

    Uses ln(s) ~ pi / (2 * AGM(1, 4/s)), whose error is O(ln(s) / s**2).
    The AGM runs at wp + log2(s) bits so that 4/s keeps full relative
    precision.
    """
    sbits = mag.bit_length() + exp2
    W = wp + sbits + 8
    one = mpz(1) << W
    # 4/s at W bits
    b = _shift(mpz(4) << W, -exp2) // mag
    agm = _agm_fixed(one, b, W, mpz(16))
    return (_pi_fixed(W) << wp) // (2 * agm)


@lru_cache(maxsize=16)
def _ln2_fixed(wp: int) -> mpz:
    """ln 2 at ``wp`` bits from ln(2**n) / n."""
    n = wp // 2 + wp.bit_length() + 8
    wl = wp + n.bit_length() + 8
    return (_ln_large_fixed(mpz(1), n, wl) // n) >> (wl - wp)


def hp_ln(x, prec_bits: int) -> HPNumber:
    """Natural logarithm of a positive number to within 2**-prec_bits.

    The argument is scaled by 2**m into the range where the AGM formula is
    accurate, and m*ln 2 is subtracted afterwards.
    """
    x = _as_hp(x)
    if x.sign <= 0:
        raise DomainError("hp_ln requires a positive argument")
    g = guard_bits(prec_bits)
    out = prec_bits + g
    if x.exact and x == 1:
        return HPNumber.zero(out)
    wp = prec_bits + 2 * g + prec_bits.bit_length()
    e = x.magnitude.bit_length() - x.scale  # x < 2**e
    m = wp // 2 + wp.bit_length() + 4 - e
    ln_s = _ln_large_fixed(x.magnitude, m - x.scale, wp)
    if m:
        w2 = wp + abs(m).bit_length() + 2
        ln_s -= _shift(m * _ln2_fixed(w2), wp - w2)
    return HPNumber.from_fixed(ln_s, wp).truncate(out)


# binary splitting

@dataclass(frozen=True)
class SeriesSpec:
    """Series sum(term(n) for n in [start, stop)) with a rational term ratio.

    ``term(start) = first_term`` and ``term(n+1)/term(n) = p(n)/q(n)``
    where ``p`` and ``q`` return exact integers.
    """

    p: Callable[[int], int]
    q: Callable[[int], int]
    first_term: Rational
    start: int
    stop: int


def _split_pqt(spec: SeriesSpec, a: int, b: int, leaf: int, split):
    """(P, Q, T) over [a, b) with sum_{n=a}^{b-1} prod_{j=a}^{n-1} p/q = T/Q."""
    if b - a <= leaf:
        P, Q, T = mpz(1), mpz(1), mpz(0)
        for n in range(a, b):
            qn = spec.q(n)
            if qn == 0:
                raise MalformedSeriesError(f"q({n}) == 0")
            T = qn * (T + P)
            Q *= qn
            P *= spec.p(n)
        return P, Q, T
    mid = split(a, b) if split is not None else (a + b) // 2
    if not a < mid < b:
        raise ValueError(f"split point {mid} outside ({a}, {b})")
    P1, Q1, T1 = _split_pqt(spec, a, mid, leaf, split)
    P2, Q2, T2 = _split_pqt(spec, mid, b, leaf, split)
    return P1 * P2, Q1 * Q2, T1 * Q2 + P1 * T2


def binary_split(
    spec: SeriesSpec,
    prec_bits: int,
    *,
    leaf_size: int = 16,
    split: Optional[Callable[[int, int], int]] = None,
) -> HPNumber:
    """Exact sum of the truncated series, truncated to ``prec_bits`` bits.

    ``leaf_size`` and ``split`` only change how the range is divided; the
    merged rational, and therefore the result, is the same for any choice.
    """
    if spec.stop <= spec.start:
        raise MalformedSeriesError("empty index range")
    if leaf_size < 1:
        raise ValueError("leaf_size must be positive")
    _, Q, T = _split_pqt(spec, spec.start, spec.stop, leaf_size, split)
    first = Fraction(spec.first_term)
    num = first.numerator * T
    den = first.denominator * Q
    if den < 0:
        num, den = -num, -den
    m, r = divmod(abs(num) << prec_bits, den)
    sign = -1 if num < 0 else 1
    return HPNumber.from_fixed(sign * m, prec_bits, exact=(r == 0))
