"""Binary fixed point <-> base-b digit strings.

Digits are always truncated, never rounded.  :func:`emit_digits` refuses to
emit when the value sits so close to a digit boundary that its own
approximation error could flip the last digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import gmpy2
from gmpy2 import mpz

from .errors import InsufficientPrecisionError
from .hpcore import HPNumber

DIGITS = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"

# leaf size for the divide-and-conquer integer -> digits conversion
_LEAF = 1024

# extra source digits required for a cross-base conversion
CONVERT_MARGIN = 8


def _check_base(base: int) -> None:
    if not 2 <= base <= 36:
        raise ValueError(f"base must be in [2, 36], got {base}")


_DELETE = {b: {ord(c): None for c in DIGITS[:b]} for b in range(2, 37)}


@dataclass(frozen=True)
class DigitString:
    """A base-``base`` expansion ``integer_part.fractional``.

    Letters are normalized to upper case on construction.
    """

    base: int
    integer_part: str
    fractional: str

    def __post_init__(self):
        _check_base(self.base)
        ip = self.integer_part.upper() or "0"
        frac = self.fractional.upper()
        for part in (ip, frac):
            bad = part.translate(_DELETE[self.base])
            if bad:
                raise ValueError(f"digit {bad[0]!r} is not valid in base {self.base}")
        object.__setattr__(self, "integer_part", ip)
        object.__setattr__(self, "fractional", frac)

    @property
    def length(self) -> int:
        return len(self.fractional)

    def __str__(self) -> str:
        return f"{self.integer_part}.{self.fractional}"


def _power_table(base: int, widths) -> dict:
    table = {}
    for w in sorted(set(widths)):
        table[w] = mpz(base) ** w
    return table


def _split_widths(n: int, out: set) -> None:
    while n > _LEAF and n not in out:
        out.add(n)
        lo = n // 2
        _split_widths(n - lo, out)
        n = lo


def int_to_digits(value, base: int, width: int) -> str:
    """``value`` (0 <= value < base**width) as exactly ``width`` digits.

    Divide and conquer: split at base**(width//2) using a precomputed power
    table, recurse on both halves, convert leaves directly.
    """
    _check_base(base)
    value = mpz(value)
    if value < 0:
        raise ValueError("value must be nonnegative")
    if width <= 0:
        if value:
            raise ValueError("value does not fit in zero digits")
        return ""
    widths: set = set()
    _split_widths(width, widths)
    powers = _power_table(base, (w // 2 for w in widths))
    pieces: List[str] = []

    def rec(v, w):
        if w <= _LEAF:
            pieces.append(v.digits(base).upper().rjust(w, "0") if v else "0" * w)
            return
        lo = w // 2
        hi, low = divmod(v, powers[lo])
        rec(hi, w - lo)
        rec(low, lo)

    rec(value, width)
    out = "".join(pieces)
    if len(out) != width:
        raise ValueError("value does not fit in the requested width")
    return out


def _integer_digits(value, base: int) -> str:
    value = mpz(value)
    if value == 0:
        return "0"
    width = 1
    while mpz(base) ** width <= value:
        width *= 2
    return int_to_digits(value, base, width).lstrip("0")


def emit_digits(x: HPNumber, base: int, n_digits: int, *, guard_bits: int = 64) -> DigitString:
    """First ``n_digits`` fractional base-``base`` digits of ``x``, truncated.

    Unless ``x.exact`` is set, ``x`` must carry at least
    ``n_digits * log2(base) + guard_bits`` fractional bits, and if the
    remainder past the last digit lies within ``2**-(guard_bits/2)`` of a
    digit boundary an :class:`InsufficientPrecisionError` is raised.
    """
    _check_base(base)
    if n_digits < 1:
        raise ValueError("n_digits must be positive")
    if x.sign < 0:
        raise ValueError("emit_digits requires x >= 0")
    bn = mpz(base) ** n_digits
    if not x.exact and x.scale < bn.bit_length() + guard_bits:
        raise InsufficientPrecisionError(
            f"{n_digits} base-{base} digits need {bn.bit_length() + guard_bits} bits, "
            f"value carries {x.scale}"
        )
    ip = x.magnitude >> x.scale
    frac = x.magnitude - (ip << x.scale)
    t = frac * bn
    d = t >> x.scale
    if not x.exact:
        r = t - (d << x.scale)
        margin = mpz(1) << max(x.scale - guard_bits // 2, 0)
        if r < margin or r > (mpz(1) << x.scale) - margin:
            raise InsufficientPrecisionError(
                f"digit {n_digits} in base {base} is within the error margin of a boundary"
            )
    return DigitString(base, _integer_digits(ip, base), int_to_digits(d, base, n_digits))


def emit_digits_naive(x: HPNumber, base: int, n_digits: int) -> DigitString:
    """Repeated multiply-by-base digit extraction, without any checks.

    Quadratic; meant as an oracle for :func:`emit_digits` on small inputs.
    """
    _check_base(base)
    ip = x.magnitude >> x.scale
    mask = (mpz(1) << x.scale) - 1
    frac = x.magnitude & mask
    out = []
    for _ in range(n_digits):
        frac *= base
        out.append(DIGITS[int(frac >> x.scale)])
        frac &= mask
    ip_digits = []
    while ip:
        ip, r = divmod(ip, base)
        ip_digits.append(DIGITS[int(r)])
    return DigitString(base, "".join(reversed(ip_digits)) or "0", "".join(out))


def _parse(digits: str, base: int) -> mpz:
    return mpz(digits, base) if digits else mpz(0)


def digits_to_value(d: DigitString, *, extra_bits: int = 64) -> HPNumber:
    """The value of a digit string as an :class:`HPNumber`.

    Non-dyadic values are rounded up at ``log2(base**length) + extra_bits``
    bits, so emitting ``d.length`` digits from the result gives back ``d``.
    The result is marked exact.
    """
    L = d.length
    bl = mpz(d.base) ** L
    scale = bl.bit_length() + extra_bits
    num = _parse(d.fractional, d.base) << scale
    frac = -((-num) // bl)
    ip = _parse(d.integer_part, d.base)
    return HPNumber.from_fixed((ip << scale) + frac, scale, exact=True)


def required_source_digits(n_digits: int, source_base: int, target_base: int) -> int:
    """Source digits needed to convert ``n_digits`` target digits."""
    return math.ceil(n_digits * math.log(target_base) / math.log(source_base)) + CONVERT_MARGIN


def convert_base(
    d: DigitString, target_base: int, n_digits: int, *, exact: bool = False
) -> DigitString:
    """Re-express a truncated expansion in another base.

    ``d`` stands for every real in ``[d, d + base**-length)``; the target
    digits are returned only if they are the same for the whole interval.
    With ``exact=True`` the digit string is taken as the exact (terminating)
    value and no margin is required.
    """
    _check_base(target_base)
    if n_digits < 1:
        raise ValueError("n_digits must be positive")
    if target_base == d.base:
        if n_digits <= d.length:
            return DigitString(d.base, d.integer_part, d.fractional[:n_digits])
        if exact:
            return DigitString(d.base, d.integer_part, d.fractional.ljust(n_digits, "0"))
        raise InsufficientPrecisionError(
            f"need {n_digits} source digits, have {d.length}"
        )
    if not exact:
        need = required_source_digits(n_digits, d.base, target_base)
        if d.length < need:
            raise InsufficientPrecisionError(
                f"need {need} base-{d.base} digits for {n_digits} base-{target_base} "
                f"digits, have {d.length}"
            )
    f = _parse(d.fractional, d.base)
    bl = mpz(d.base) ** d.length
    tn = mpz(target_base) ** n_digits
    digits = f * tn // bl
    if not exact and (f + 1) * tn > (digits + 1) * bl:
        raise InsufficientPrecisionError(
            "source interval straddles a target digit boundary; supply more digits"
        )
    ip = _parse(d.integer_part, d.base)
    return DigitString(
        target_base, _integer_digits(ip, target_base), int_to_digits(digits, target_base, n_digits)
    )
