"""Reading and writing plain-text digit files.

File layout: optional integer part, a single ``.``, fractional digits.
Only the fractional digits are delivered.  In LENIENT mode space, tab, CR
and LF are ignored anywhere; STRICT mode allows nothing but digits and the
radix point.  Hex letters may be either case.
"""

from __future__ import annotations

import enum
import io
import os
from dataclasses import dataclass
from typing import BinaryIO, Iterator, List, Optional, Union

import numpy as np

from .errors import StreamFormatError, ValidationError
from .radix import DIGITS, DigitString

DEFAULT_CHUNK = 1 << 20
_READ_BLOCK = 1 << 20
# longest integer part accepted before the radix point
_MAX_INTEGER_PART = 1 << 16

_WS = 254
_DOT = 253
_BAD = 255

_LUT = np.full(256, _BAD, dtype=np.uint8)
for _i, _c in enumerate(DIGITS):
    _LUT[ord(_c)] = _i
    _LUT[ord(_c.lower())] = _i
for _c in " \t\r\n":
    _LUT[ord(_c)] = _WS
_LUT[ord(".")] = _DOT

Source = Union[str, os.PathLike, bytes, bytearray, BinaryIO]


class ParseMode(enum.Enum):
    STRICT = "strict"
    LENIENT = "lenient"


@dataclass(frozen=True)
class DigitStreamHeader:
    base: int = 10
    declared_fractional_count: Optional[int] = None
    source_label: str = ""
    parse_mode: ParseMode = ParseMode.LENIENT


@dataclass(frozen=True)
class DigitChunk:
    """A block of digit values; ``offset`` is the index of the first one
    counted from the first fractional digit."""

    digits: np.ndarray
    offset: int

    def __len__(self) -> int:
        return len(self.digits)


def decode_digits(text: Union[str, bytes], base: int) -> np.ndarray:
    """Raw digit characters (no radix point, no whitespace) to uint8 values."""
    if isinstance(text, str):
        text = text.encode("ascii")
    vals = _LUT[np.frombuffer(text, dtype=np.uint8)]
    bad = vals >= base
    if bad.any():
        i = int(np.argmax(bad))
        raise StreamFormatError(f"byte {i}: {chr(text[i])!r} is not a base-{base} digit")
    return vals


def _open(source: Source):
    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(source), True
    if isinstance(source, (str, os.PathLike)):
        return open(source, "rb"), True
    return source, False


def _invalid(vals, raw, pos: int, base: int, at: int) -> StreamFormatError:
    v = int(vals[pos])
    ch = chr(raw[pos])
    if v == _DOT:
        msg = "second radix point"
    elif v == _WS:
        msg = f"whitespace {ch!r} not allowed in strict mode"
    elif v < 36:
        msg = f"digit {ch!r} is not valid in base {base}"
    else:
        msg = f"invalid character {ch!r}"
    return StreamFormatError(f"byte {at + pos}: {msg}")


def _blocks(fh, base: int, mode: ParseMode, fractional_only: bool) -> Iterator[np.ndarray]:
    """Yield arrays of fractional digit values as they are parsed."""
    strict = mode is ParseMode.STRICT
    in_fraction = fractional_only
    consumed = 0
    while True:
        raw = fh.read(_READ_BLOCK)
        if not raw:
            break
        vals = _LUT[np.frombuffer(raw, dtype=np.uint8)]
        start = 0
        if not in_fraction:
            dots = np.flatnonzero(vals == _DOT)
            head_end = int(dots[0]) if len(dots) else len(vals)
            head = vals[:head_end]
            ok = head < base if strict else (head < base) | (head == _WS)
            if not ok.all():
                raise _invalid(head, raw, int(np.argmin(ok)), base, consumed)
            if not len(dots):
                consumed += len(raw)
                if consumed > _MAX_INTEGER_PART:
                    raise StreamFormatError(
                        "no radix point found; use fractional_only for bare fractional digits"
                    )
                continue
            in_fraction = True
            start = head_end + 1
        body = vals[start:]
        digit = body < base
        ok = digit if strict else digit | (body == _WS)
        if not ok.all():
            raise _invalid(body, raw[start:], int(np.argmin(ok)), base, consumed + start)
        consumed += len(raw)
        out = body if strict else body[digit]
        if len(out):
            yield out
    if not in_fraction:
        raise StreamFormatError(
            "no radix point found; use fractional_only for bare fractional digits"
        )


def open_stream(
    source: Source,
    base: int = 10,
    parse_mode: ParseMode = ParseMode.LENIENT,
    *,
    chunk_size: int = DEFAULT_CHUNK,
    fractional_only: bool = False,
) -> Iterator[DigitChunk]:
    """Yield the fractional digits of a digit file as fixed-size chunks.

    ``source`` is a path, a bytes object or a binary file object.  Every
    chunk but the last holds exactly ``chunk_size`` digits.  With
    ``fractional_only`` the file holds bare fractional digits and any radix
    point in it is an error.
    """
    if not 2 <= base <= 36:
        raise ValueError(f"base must be in [2, 36], got {base}")
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    parse_mode = ParseMode(parse_mode)
    fh, owned = _open(source)
    try:
        pending: List[np.ndarray] = []
        npending = 0
        offset = 0
        for block in _blocks(fh, base, parse_mode, fractional_only):
            pending.append(block)
            npending += len(block)
            if npending < chunk_size:
                continue
            buf = np.concatenate(pending) if len(pending) > 1 else pending[0]
            n_full = (len(buf) // chunk_size) * chunk_size
            for i in range(0, n_full, chunk_size):
                yield DigitChunk(buf[i : i + chunk_size], offset)
                offset += chunk_size
            rest = buf[n_full:]
            pending = [rest] if len(rest) else []
            npending = len(rest)
        if npending:
            buf = np.concatenate(pending) if len(pending) > 1 else pending[0]
            yield DigitChunk(buf, offset)
    finally:
        if owned:
            fh.close()


def read_digits(source: Source, base: int = 10, parse_mode=ParseMode.LENIENT, **kw) -> np.ndarray:
    """All fractional digit values of ``source`` as one uint8 array."""
    chunks = [c.digits for c in open_stream(source, base, parse_mode, **kw)]
    if not chunks:
        return np.zeros(0, dtype=np.uint8)
    return np.concatenate(chunks)


def read_digit_string(source: Source, base: int = 10, parse_mode=ParseMode.LENIENT) -> DigitString:
    """Load a whole digit file, integer part included."""
    fh, owned = _open(source)
    try:
        raw = fh.read()
    finally:
        if owned:
            fh.close()
    text = raw.decode("ascii", errors="replace")
    if ParseMode(parse_mode) is ParseMode.LENIENT:
        text = "".join(text.split())
    ip, dot, frac = text.partition(".")
    if not dot:
        raise StreamFormatError("no radix point found")
    try:
        return DigitString(base, ip, frac)
    except ValueError as exc:
        raise StreamFormatError(str(exc)) from None


def write_stream(digits: DigitString, path, line_width: int = 0) -> int:
    """Write ``int.frac`` to ``path``, wrapping every ``line_width`` digits.

    Returns the number of fractional digits written.
    """
    if line_width < 0:
        raise ValueError("line_width must be nonnegative")
    frac = digits.fractional
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{digits.integer_part}.")
        if line_width == 0:
            fh.write(frac)
        else:
            for i in range(0, len(frac), line_width):
                fh.write(frac[i : i + line_width])
                fh.write("\n")
    return len(frac)


@dataclass(frozen=True)
class StreamReport:
    digit_count: int
    first_digits: str
    last_digits: str
    source_label: str = ""


def validate_stream(source: Source, header: DigitStreamHeader, *, edge: int = 32) -> StreamReport:
    """Count the digits of a file and check them against the header."""
    count = 0
    first = ""
    tail = np.zeros(0, dtype=np.uint8)
    for chunk in open_stream(source, header.base, header.parse_mode):
        if len(first) < edge:
            need = edge - len(first)
            first += "".join(DIGITS[v] for v in chunk.digits[:need])
        tail = np.concatenate([tail, chunk.digits])[-edge:]
        count += len(chunk)
    declared = header.declared_fractional_count
    if declared is not None and declared != count:
        raise ValidationError(f"digit count mismatch: declared {declared}, found {count}")
    last = "".join(DIGITS[v] for v in tail)
    return StreamReport(count, first, last, header.source_label)
