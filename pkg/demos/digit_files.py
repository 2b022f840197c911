"""
Digit files
===========

A digit file is ``<integer part>.<fractional digits>``, optionally wrapped.
Only the fractional digits are analysed, and they are delivered in
fixed-size chunks no matter how the file is laid out.
"""

import os
import tempfile

import numpy as np

from digitnorm.constants import lemniscate_family
from digitnorm.errors import StreamFormatError, ValidationError
from digitnorm.radix import emit_digits
from digitnorm.stream import DigitStreamHeader, ParseMode, open_stream, validate_stream, write_stream

s = lemniscate_family(10010)[0].value
digits = emit_digits(s, 10, 10000)

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "s.txt")
    write_stream(digits, path, line_width=80)
    with open(path) as fh:
        print(fh.readline().rstrip(), "...")

    # the integer part '5' is skipped; chunk sizes do not change the sequence
    for size in (7, 4096):
        chunks = list(open_stream(path, 10, chunk_size=size))
        joined = np.concatenate([c.digits for c in chunks])
        print(f"chunk size {size:>5}: {len(chunks):>5} chunks, first digits {joined[:8]}")

    rep = validate_stream(path, DigitStreamHeader(10, 10000, "lemniscate-arc"))
    print("validated:", rep.digit_count, "digits, first", rep.first_digits[:16])

    try:
        validate_stream(path, DigitStreamHeader(10, 10001))
    except ValidationError as exc:
        print("validation failure:", exc)

    # strict mode does not allow the line breaks
    try:
        list(open_stream(path, 10, ParseMode.STRICT))
    except StreamFormatError as exc:
        print("strict mode:", exc)

# hex letters in either case
print(next(open_stream(b"0.Ea7c", 16)).digits)
