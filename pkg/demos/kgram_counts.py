"""
Counting digit sequences
========================

Every position of the expansion starts a window of k digits; windows
overlap, so N digits give N - k + 1 windows.  The vectorised counter is
checked against a one-window-at-a-time loop.
"""

import time

import numpy as np

from digitnorm.counts import Position, count_all, count_naive, marginalize

print(count_all("0123456789", 10, 2)[2].total_positions, "pairs in ten digits")
c = count_all("111", 10, 2)[2]
print('"111" contains "11"', c.counts[11], "times")

rng = np.random.default_rng(0)
digits = rng.integers(0, 16, 200_000).astype(np.uint8)

tables = count_all(digits, 16, 3)
for k, t in tables.items():
    print(f"k={k}: {t.n_categories:>5} sequences, {t.total_positions} windows")

# independent check
slow = count_naive(digits[:20000], 16, 3)
fast = count_all(digits[:20000], 16, 3)[3]
print("fast == naive:", fast == slow)

# chunking and threads do not change the result
chunks = [digits[i : i + 999] for i in range(0, len(digits), 999)]
print("chunked, 4 workers == single pass:", count_all(chunks, 16, 3, workers=4)[3] == tables[3])

# summing out the last digit of each triple gives the pair counts without the final window
print("marginal == direct:", marginalize(tables[3], Position.LAST) == count_all(digits[:-1], 16, 2)[2])

big = rng.integers(0, 10, 10 ** 7).astype(np.uint8)
t = time.perf_counter()
count_all([big[i : i + (1 << 20)] for i in range(0, len(big), 1 << 20)], 10, 3)
print(f"10^7 digits, k=1..3: {time.perf_counter() - t:.2f} s")
