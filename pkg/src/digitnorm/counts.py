"""Overlapping k-gram counting over digit streams.

A k-gram at position i is the window ``d[i] .. d[i+k-1]``; its index is the
big-endian base-b value ``sum d[i+j] * b**(k-1-j)``.  A stream of N digits
has ``M = N - k + 1`` windows.

:func:`count_all` is the production counter: one pass over the chunks,
carrying the last ``K - 1`` digits across chunk boundaries, vectorised with
numpy and optionally spread over worker threads.  :func:`count_naive` is a
plain Python loop kept as the independent check.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Union

import numpy as np

from .errors import ValidationError
from .radix import DIGITS
from .stream import DigitChunk, decode_digits

MAX_K = 8
# largest count table we are willing to allocate
MAX_TABLE = 1 << 28
INT64_MAX = np.iinfo(np.int64).max

StreamLike = Union[str, bytes, np.ndarray, Sequence[int], Iterable[DigitChunk]]


class Position(enum.Enum):
    FIRST = "first"
    LAST = "last"


@dataclass(eq=False)
class KGramCounts:
    base: int
    k: int
    counts: np.ndarray
    total_positions: int
    source_label: str = ""

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (self.base ** self.k,):
            raise ValueError(
                f"count table has shape {self.counts.shape}, expected ({self.base ** self.k},)"
            )
        if (self.counts < 0).any():
            raise ValueError("negative count")
        if int(self.counts.sum()) != self.total_positions:
            raise ValueError(
                f"counts sum to {int(self.counts.sum())}, total_positions is {self.total_positions}"
            )

    @property
    def n_categories(self) -> int:
        return self.base ** self.k

    @property
    def digit_count(self) -> int:
        """Stream length N implied by the window count."""
        return self.total_positions + self.k - 1 if self.total_positions else 0

    def label(self, index: int) -> str:
        """The k-gram text for a table index, e.g. ``"0FF"``."""
        out = []
        for _ in range(self.k):
            index, r = divmod(index, self.base)
            out.append(DIGITS[r])
        return "".join(reversed(out))

    def __eq__(self, other):
        if not isinstance(other, KGramCounts):
            return NotImplemented
        return (
            self.base == other.base
            and self.k == other.k
            and self.total_positions == other.total_positions
            and np.array_equal(self.counts, other.counts)
        )

    def to_document(self) -> dict:
        return {
            "source_label": self.source_label,
            "base": self.base,
            "k": self.k,
            "total_positions": int(self.total_positions),
            "counts": [int(c) for c in self.counts],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "KGramCounts":
        counts = doc["counts"]
        if not all(isinstance(c, int) for c in counts):
            raise ValidationError("counts must be exact integers")
        return cls(
            int(doc["base"]), int(doc["k"]), np.array(counts, dtype=np.int64),
            int(doc["total_positions"]), str(doc.get("source_label", "")),
        )


def zero_counts(base: int, k: int, source_label: str = "") -> KGramCounts:
    return KGramCounts(base, k, np.zeros(base ** k, dtype=np.int64), 0, source_label)


def _check_shape(base: int, k: int) -> None:
    if not 2 <= base <= 36:
        raise ValueError(f"base must be in [2, 36], got {base}")
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in [1, {MAX_K}], got {k}")
    if base ** k > MAX_TABLE:
        raise ValueError(f"a table of {base}**{k} entries is too large")


def _arrays(stream: StreamLike, base: int) -> Iterator[np.ndarray]:
    """Normalise the accepted stream types to uint8 digit arrays."""
    if isinstance(stream, (str, bytes)):
        yield decode_digits(stream, base)
        return
    if isinstance(stream, np.ndarray):
        arrays: Iterable = [stream]
    elif isinstance(stream, (list, tuple)) and (not stream or np.isscalar(stream[0])):
        arrays = [np.asarray(stream, dtype=np.int64)]
    else:
        arrays = (c.digits if isinstance(c, DigitChunk) else np.asarray(c) for c in stream)
    for a in arrays:
        if len(a) and (int(a.max()) >= base or int(a.min()) < 0):
            raise ValidationError(f"digit outside [0, {base}) in stream")
        yield a


def _window_index(buf: np.ndarray, base: int, k: int, start: int) -> np.ndarray:
    n = len(buf) - k + 1 - start
    idx = buf[start : start + n].astype(np.int64)
    for j in range(1, k):
        idx *= base
        idx += buf[start + j : start + j + n]
    return idx


def _count_block(tail: np.ndarray, chunk: np.ndarray, base: int, ks) -> Dict[int, np.ndarray]:
    """Counts of the windows that end inside ``chunk`` (``tail`` precedes it)."""
    buf = np.concatenate([tail, chunk]) if len(tail) else chunk
    t = len(tail)
    out = {}
    for k in ks:
        start = max(0, t - k + 1)
        if len(buf) - k + 1 - start <= 0:
            out[k] = np.zeros(base ** k, dtype=np.int64)
            continue
        idx = _window_index(buf, base, k, start)
        out[k] = np.bincount(idx, minlength=base ** k).astype(np.int64)
    return out


def count_all(
    stream: StreamLike,
    base: int,
    ks: Union[int, Iterable[int]] = 3,
    *,
    workers: int = 1,
    source_label: str = "",
) -> Dict[int, KGramCounts]:
    """Count every k in ``ks`` (an int K means 1..K) in a single pass.

    Chunks are processed by ``workers`` threads, each producing a private
    table; tables are summed in chunk order, so the result does not depend
    on the worker count or on how the stream was chunked.
    """
    ks = tuple(range(1, ks + 1)) if isinstance(ks, int) else tuple(sorted(set(ks)))
    if not ks:
        raise ValueError("no k requested")
    for k in ks:
        _check_shape(base, k)
    if workers < 1:
        raise ValueError("workers must be positive")
    carry = max(ks) - 1
    totals = {k: np.zeros(base ** k, dtype=np.int64) for k in ks}
    n_digits = 0

    def blocks():
        nonlocal n_digits
        tail = np.zeros(0, dtype=np.uint8)
        for arr in _arrays(stream, base):
            if not len(arr):
                continue
            n_digits += len(arr)
            yield tail, arr
            if carry:
                tail = np.concatenate([tail, arr[-carry:]])[-carry:]

    def accumulate(part):
        for k in ks:
            totals[k] += part[k]

    if workers == 1:
        for tail, arr in blocks():
            accumulate(_count_block(tail, arr, base, ks))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            inflight: deque = deque()
            for tail, arr in blocks():
                inflight.append(pool.submit(_count_block, tail, arr, base, ks))
                if len(inflight) >= 2 * workers:
                    accumulate(inflight.popleft().result())
            while inflight:
                accumulate(inflight.popleft().result())

    if n_digits < max(ks):
        raise ValidationError(f"stream has {n_digits} digits, shorter than k={max(ks)}")
    if n_digits >= INT64_MAX:
        raise OverflowError("digit count exceeds 64-bit range")
    return {
        k: KGramCounts(base, k, totals[k], n_digits - k + 1, source_label) for k in ks
    }


def count_kgrams(stream: StreamLike, base: int, k: int, *, workers: int = 1,
                 source_label: str = "") -> KGramCounts:
    """Overlapping k-gram counts of one length."""
    return count_all(stream, base, (k,), workers=workers, source_label=source_label)[k]


def _flat_digits(stream: StreamLike, base: int) -> Iterator[int]:
    if isinstance(stream, str):
        for ch in stream:
            v = int(ch, 36)
            if v >= base:
                raise ValidationError(f"digit {ch!r} outside base {base}")
            yield v
        return
    for arr in _arrays(stream, base):
        yield from arr.tolist()


def count_naive(stream: StreamLike, base: int, k: int, source_label: str = "") -> KGramCounts:
    """Reference counter: one window at a time, no vectorisation, no threads."""
    _check_shape(base, k)
    counts = [0] * base ** k
    window: List[int] = []
    n = 0
    for d in _flat_digits(stream, base):
        n += 1
        window.append(d)
        if len(window) > k:
            window.pop(0)
        if len(window) == k:
            v = 0
            for x in window:
                v = v * base + x
            counts[v] += 1
    if n < k:
        raise ValidationError(f"stream has {n} digits, shorter than k={k}")
    return KGramCounts(base, k, np.array(counts, dtype=np.int64), n - k + 1, source_label)


def count_segmented(digits: np.ndarray, base: int, k: int, segments: int) -> KGramCounts:
    """Split ``digits`` into segments, count each separately, merge.

    Every segment except the last is extended by the first ``k - 1``
    digits of its right neighbour so each window is counted exactly once.
    """
    digits = np.asarray(digits)
    n = len(digits)
    if segments < 1:
        raise ValueError("segments must be positive")
    bounds = np.linspace(0, max(n - k + 1, 0), segments + 1).astype(int)
    total = zero_counts(base, k)
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi <= lo:
            continue
        total = merge_counts(total, count_kgrams(digits[lo : hi + k - 1], base, k))
    if n < k:
        raise ValidationError(f"stream has {n} digits, shorter than k={k}")
    return total


def merge_counts(a: KGramCounts, b: KGramCounts) -> KGramCounts:
    """Element-wise sum of two tables from adjacent stream ranges."""
    if a.base != b.base or a.k != b.k:
        raise ValueError(f"cannot merge base {a.base} k={a.k} with base {b.base} k={b.k}")
    total = a.total_positions + b.total_positions
    if total >= INT64_MAX:
        raise OverflowError("merged position count exceeds 64-bit range")
    label = a.source_label if a.source_label == b.source_label else a.source_label or b.source_label
    return KGramCounts(a.base, a.k, a.counts + b.counts, total, label)


def marginalize(c: KGramCounts, position: Union[Position, str]) -> KGramCounts:
    """Sum out the FIRST or LAST digit of each window, giving (k-1)-gram counts."""
    position = Position(position)
    if c.k < 2:
        raise ValueError("cannot marginalize 1-gram counts")
    table = c.counts.reshape((c.base,) * c.k)
    axis = 0 if position is Position.FIRST else c.k - 1
    reduced = table.sum(axis=axis).reshape(-1)
    return KGramCounts(c.base, c.k - 1, reduced, c.total_positions, c.source_label)


def save_counts(tables: Union[KGramCounts, Sequence[KGramCounts]], path) -> None:
    """Write one table as a JSON object, several as a JSON array of them."""
    if isinstance(tables, KGramCounts):
        doc = tables.to_document()
    else:
        doc = [t.to_document() for t in tables]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_counts(path) -> List[KGramCounts]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    docs = doc if isinstance(doc, list) else [doc]
    try:
        return [KGramCounts.from_document(d) for d in docs]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: malformed counts document ({exc})") from None
