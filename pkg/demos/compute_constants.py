"""
Computing the constants
=======================

Catalan's constant from a fast binary-splitting series, and the lemniscate
family from one arithmetic-geometric mean.  Each value comes back as a
binary fixed-point number with guard bits; digits are emitted by truncation.
"""

import time

from digitnorm.constants import (
    catalan,
    catalan_defining_accelerated,
    catalan_defining_partial,
    lemniscate_family,
    lemniscate_integral_oracle,
)
from digitnorm.radix import emit_digits

# Catalan's constant to 50 digits
G = catalan(50)
print("G  =", emit_digits(G.value, 10, 50))
print("   ", G.method)

# the defining series  sum (-1)^n / (2n+1)^2  converges very slowly ...
for n in (10, 1000, 100000):
    partial = catalan_defining_partial(n)
    print(f"{n:>6} terms: {float(partial.to_fraction()):.15f}")

# ... but an accelerated version of it gives an independent check
est, bound = catalan_defining_accelerated(30)
print("accelerated oracle:", f"{float(est):.15f}", "error bound", f"{float(bound):.1e}")

# the lemniscate family: s, L = s/2, L1 = L/2, L2, Gauss's constant, Gamma(1/4)
for cv in lemniscate_family(30):
    print(f"{cv.id.value:>15} = {emit_digits(cv.value, 10, 30)}")

# the quarter arc as a plain numerical integral, computed a different way
q = lemniscate_integral_oracle(20)
print("integral_0^1 dt/sqrt(1-t^4) =", f"{float(q.to_fraction()):.15f}", "(= s/4)")

# a larger run
t = time.perf_counter()
big = catalan(100000)
print(f"100000 digits of G in {time.perf_counter() - t:.1f} s; last ten:",
      emit_digits(big.value, 10, 100000).fractional[-10:])
