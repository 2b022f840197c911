"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 validation or verification
failure, 3 insufficient precision.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys

from . import __version__
from .constants import ConstantId, compute_constant
from .counts import count_all, count_naive, load_counts, save_counts
from .errors import InsufficientPrecisionError, StreamFormatError, ValidationError
from .radix import convert_base, emit_digits
from .report import build_report, render, render_histogram_csv
from .stream import ParseMode, open_stream, read_digit_string, write_stream

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_PRECISION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _mode(args) -> ParseMode:
    return ParseMode.STRICT if args.strict else ParseMode.LENIENT


def cmd_compute(args) -> int:
    cid = ConstantId(args.constant)
    decimal = math.ceil(args.digits * math.log10(args.base))
    for extra in (0, 20, 40, 80):
        value = compute_constant(cid, decimal + extra).value
        try:
            digits = emit_digits(value, args.base, args.digits)
            break
        except InsufficientPrecisionError:
            continue
    else:
        raise InsufficientPrecisionError(f"could not certify {args.digits} digits")
    n = write_stream(digits, args.out, args.line_width)
    print(f"wrote {n} base-{args.base} digits of {cid.value} to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_count(args) -> int:
    stream = open_stream(args.input, args.base, _mode(args), fractional_only=args.fractional_only)
    label = args.label or os.path.basename(args.input)
    tables = count_all(stream, args.base, args.max_k, workers=args.workers, source_label=label)
    save_counts(list(tables.values()), args.out)
    n = tables[1].digit_count if 1 in tables else next(iter(tables.values())).digit_count
    print(f"counted {n} digits, k=1..{args.max_k} -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    tables = []
    sha = hashlib.sha256()
    for path in args.counts:
        with open(path, "rb") as fh:
            sha.update(fh.read())
        tables.extend(load_counts(path))
    labels = sorted({t.source_label for t in tables if t.source_label})
    report = build_report(tables, args.label or ",".join(labels), sha.hexdigest(), args.bins)
    with open(args.out_report, "w", encoding="utf-8") as fh:
        fh.write(render(report, args.format))
    if args.histogram_dir:
        os.makedirs(args.histogram_dir, exist_ok=True)
        for h in report.histograms:
            path = os.path.join(args.histogram_dir, f"hist_b{h.base}_k{h.k}.csv")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(render_histogram_csv(h))
    return EXIT_OK


def cmd_verify(args) -> int:
    mode = _mode(args)
    fast = count_all(open_stream(args.input, args.base, mode, fractional_only=args.fractional_only),
                     args.base, args.max_k)
    bad = []
    for k in range(1, args.max_k + 1):
        stream = open_stream(args.input, args.base, mode, fractional_only=args.fractional_only)
        slow = count_naive(stream, args.base, k)
        status = "ok" if slow == fast[k] else "MISMATCH"
        if slow != fast[k]:
            bad.append(k)
        print(f"k={k}: M={fast[k].total_positions} {status}")
    if bad:
        print(f"counter mismatch for k={bad}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_convert(args) -> int:
    d = read_digit_string(args.input, args.from_base, _mode(args))
    out = convert_base(d, args.to_base, args.digits)
    n = write_stream(out, args.out, args.line_width)
    print(f"wrote {n} base-{args.to_base} digits to {args.out}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="digitnorm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="compute a constant and write its digits")
    p.add_argument("--constant", required=True, choices=[c.value for c in ConstantId])
    p.add_argument("--digits", required=True, type=int)
    p.add_argument("--base", type=int, default=10, choices=(10, 16))
    p.add_argument("--out", required=True)
    p.add_argument("--line-width", type=int, default=0)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("count", help="count k-grams of a digit file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--fractional-only", action="store_true",
                   help="file holds bare fractional digits without a radix point")
    p.add_argument("--label", default="")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("analyze", help="variance table from count files")
    p.add_argument("--counts", nargs="+", required=True)
    p.add_argument("--out-report", required=True)
    p.add_argument("--format", choices=("csv", "markdown", "structured"), default="markdown")
    p.add_argument("--bins", type=int, default=32)
    p.add_argument("--histogram-dir")
    p.add_argument("--label", default="")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="compare the fast and the naive counter")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--fractional-only", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", help="convert a digit file to another base")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--from-base", type=int, required=True)
    p.add_argument("--to-base", type=int, required=True)
    p.add_argument("--digits", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--line-width", type=int, default=0)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except InsufficientPrecisionError as exc:
        print(f"insufficient precision: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValidationError, StreamFormatError) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
