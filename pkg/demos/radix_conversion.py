"""
Decimal and hexadecimal expansions of one value
===============================================

Both expansions are emitted from the same binary number.  Converting the
decimal digits to hexadecimal must give the same answer, provided enough
decimal digits are supplied to pin down every hex digit.
"""

import math

from digitnorm.constants import catalan
from digitnorm.errors import InsufficientPrecisionError
from digitnorm.radix import DigitString, convert_base, digits_to_value, emit_digits

G = catalan(1300).value

dec = emit_digits(G, 10, 1220)
hexd = emit_digits(G, 16, 1000)
print("decimal:", dec.fractional[:40], "...")
print("hex:    ", hexd.fractional[:40], "...")

# how many decimal digits are needed for n hex digits
n = 1000
need = math.ceil(n * math.log(16) / math.log(10)) + 8
print(f"{n} hex digits need {need} decimal digits")
print("converted == direct:", convert_base(dec, 16, n) == hexd)

# too few source digits: the converter refuses rather than guess
try:
    convert_base(DigitString(10, "0", dec.fractional[:10]), 16, 10)
except InsufficientPrecisionError as exc:
    print("refused:", exc)

# a terminating decimal can be converted exactly
print("0.8 in hex:", convert_base(DigitString(10, "0", "8"), 16, 8, exact=True))

# digits -> value -> digits is the identity
d = DigitString(16, "0", "EA7CB89F")
print("round trip:", emit_digits(digits_to_value(d), 16, 8) == d)
