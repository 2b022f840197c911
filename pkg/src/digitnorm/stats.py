"""Variance-of-frequencies statistics for k-gram count tables.

Under the normality hypothesis every one of the m = b**k k-grams occurs
with limiting frequency p = 1/m, and an observed frequency over M windows
is modelled as binomial: variance p(1-p)/M.  The spread of the m observed
frequencies is compared with that prediction; the comparison's own
uncertainty is the standard error of a sample variance of m near-normal
values, sigma**2 * sqrt(2/(m-1)).

Everything here is float64, computed from exact integer counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

import numpy as np

from .counts import KGramCounts


@dataclass(frozen=True)
class FrequencyStats:
    base: int
    k: int
    m: int
    M: int
    p: float
    predicted_variance: float
    predicted_error: float
    actual_variance: float
    deviation_sigma: float
    min_frequency: float = float("nan")
    min_label: str = ""
    max_frequency: float = float("nan")
    max_label: str = ""


@dataclass(frozen=True)
class HistogramData:
    """Equal-width bins over [p - 4 sigma, p + 4 sigma] plus two overflow bins."""

    p: float
    sigma: float
    edges: np.ndarray = field(repr=False)
    occupancy: np.ndarray = field(repr=False)
    underflow: int
    overflow: int
    base: int = 0
    k: int = 0

    @property
    def total(self) -> int:
        return int(self.occupancy.sum()) + self.underflow + self.overflow

    @property
    def guide_lines(self) -> Tuple[float, float, float, float]:
        """p - 2 sigma, p - sigma, p + sigma, p + 2 sigma."""
        p, s = self.p, self.sigma
        return (p - 2 * s, p - s, p + s, p + 2 * s)


def frequencies(c: KGramCounts) -> np.ndarray:
    if c.total_positions <= 0:
        raise ValueError("no windows counted")
    return c.counts / float(c.total_positions)


def limiting_frequency(base: int, k: int) -> float:
    return 1.0 / base ** k


def predicted_variance(base: int, k: int, N: int) -> float:
    """p(1-p)/M for p = base**-k and M = N - k + 1 windows."""
    if N < k:
        raise ValueError(f"N={N} is shorter than k={k}")
    m = base ** k
    return float(Fraction(m - 1, m * m * (N - k + 1)))


def predicted_error(variance: float, m: int) -> float:
    """Expected error of a variance estimated from m categories."""
    if m < 2:
        raise ValueError("need at least two categories")
    return variance * math.sqrt(2.0 / (m - 1))


def actual_variance(c: KGramCounts) -> float:
    """sum_v (f_v - 1/m)**2 / (m - 1) over the observed frequencies."""
    m = c.n_categories
    if m < 2:
        raise ValueError("need at least two categories")
    M = c.total_positions
    if M <= 0:
        raise ValueError("no windows counted")
    # f_v - 1/m = (m c_v - M) / (m M), numerator exact in int64
    d = (m * c.counts - M).astype(np.float64)
    return float(np.dot(d, d)) / (float(m) * m * float(M) * M * (m - 1))


def deviation(predicted: float, error: float, actual: float) -> float:
    """(predicted - actual) / error, in units of the error."""
    if not error > 0:
        raise ValueError("error must be positive")
    return (predicted - actual) / error


def per_gram_z(c: KGramCounts) -> np.ndarray:
    """z_v = (f_v - p) / sqrt(p(1-p)/M) for every k-gram."""
    M = c.total_positions
    if M <= 0:
        raise ValueError("no windows counted")
    m = c.n_categories
    p = 1.0 / m
    return (c.counts - M * p) / math.sqrt(M * p * (1.0 - p))


def fraction_within(c: KGramCounts, n_sigma: float = 1.0) -> float:
    """Share of k-grams whose frequency lies within n_sigma of p."""
    z = per_gram_z(c)
    return float(np.mean(np.abs(z) <= n_sigma))


def compute_stats(c: KGramCounts) -> FrequencyStats:
    """The full variance row for one table."""
    m = c.n_categories
    pv = predicted_variance(c.base, c.k, c.digit_count)
    pe = predicted_error(pv, m)
    av = actual_variance(c)
    f = frequencies(c)
    lo, hi = int(np.argmin(f)), int(np.argmax(f))
    return FrequencyStats(
        base=c.base, k=c.k, m=m, M=c.total_positions, p=1.0 / m,
        predicted_variance=pv, predicted_error=pe, actual_variance=av,
        deviation_sigma=deviation(pv, pe, av),
        min_frequency=float(f[lo]), min_label=c.label(lo),
        max_frequency=float(f[hi]), max_label=c.label(hi),
    )


def histogram(c: KGramCounts, bins: int = 32) -> HistogramData:
    """Occupancy of frequency bins around p, with sigma from the binomial model."""
    if bins < 2:
        raise ValueError("need at least two bins")
    m = c.n_categories
    p = 1.0 / m
    sigma = math.sqrt(predicted_variance(c.base, c.k, c.digit_count))
    lo = p - 4 * sigma
    width = 8 * sigma / bins
    edges = lo + width * np.arange(bins + 1)
    idx = np.floor((frequencies(c) - lo) / width).astype(np.int64)
    under = int((idx < 0).sum())
    over = int((idx >= bins).sum())
    inside = idx[(idx >= 0) & (idx < bins)]
    occupancy = np.bincount(inside, minlength=bins).astype(np.int64)
    return HistogramData(p, sigma, edges, occupancy, under, over, c.base, c.k)
