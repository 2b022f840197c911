"""
The variance statistic
======================

If every one of the m = b^k sequences occurs with probability p = 1/m,
an observed frequency over M windows has variance p(1-p)/M.  The spread of
the m observed frequencies is compared with that prediction, in units of
the sampling error of a variance estimated from m values.
"""

import numpy as np

from digitnorm.counts import count_all
from digitnorm.stats import (
    compute_stats,
    deviation,
    fraction_within,
    histogram,
    predicted_error,
    predicted_variance,
)

# the predicted column for 6e11 decimal and about 4.98e11 hexadecimal digits
for b, N in ((10, 600_000_000_100), (16, 498_289_214_317)):
    for k in (1, 2, 3):
        v = predicted_variance(b, k, N)
        print(f"b={b} k={k}: {v:.3e} +- {predicted_error(v, b ** k):.3e}")

# a deviation from rounded numbers
print("deviation:", round(deviation(1.500e-13, 0.707e-13, 1.097e-13), 3))

# a seeded random stream behaves like a normal number should
rng = np.random.default_rng(1)
tables = count_all(rng.integers(0, 10, 10 ** 6), 10, 3)
for k, t in tables.items():
    s = compute_stats(t)
    print(f"k={k}: predicted {s.predicted_variance:.3e}, actual {s.actual_variance:.3e}, "
          f"deviation {s.deviation_sigma:+.2f} sigma")

print(f"pairs within one sigma: {100 * fraction_within(tables[2]):.0f}%")

h = histogram(tables[2], 16)
for lo, n in zip(h.edges[:-1], h.occupancy):
    print(f"{lo:.6f} {'#' * int(n)}")
