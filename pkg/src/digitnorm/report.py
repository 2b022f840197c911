"""Analysis reports: variance tables, histogram data and the end-to-end run."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .constants import ConstantId, compute_constant
from .counts import KGramCounts, count_all
from .errors import InsufficientPrecisionError
from .radix import emit_digits
from .stats import FrequencyStats, HistogramData, compute_stats, histogram
from .stream import DEFAULT_CHUNK, ParseMode, decode_digits, open_stream

TABLE_COLUMNS = (
    "Base",
    "Length of Sequence",
    "Predicted Variance and Error of Frequencies",
    "Actual Variance of Frequencies",
    "Deviation [sigma]",
)
CSV_COLUMNS = (
    "base", "length", "predicted_variance", "predicted_error", "actual_variance", "deviation_sigma",
)


@dataclass
class AnalysisReport:
    label: str
    digit_counts: Dict[int, int]
    stats: List[FrequencyStats]
    histograms: List[HistogramData] = field(default_factory=list)
    tool_version: str = __version__
    input_checksum: str = ""

    @property
    def bases(self) -> Tuple[int, ...]:
        return tuple(sorted(self.digit_counts))


def _exponent(x: float) -> int:
    if x == 0 or not math.isfinite(x):
        return 0
    return int(f"{x:.3e}".split("e")[1])


def _mantissa(x: float, exp: int) -> str:
    return f"{x / 10.0 ** exp:.3f}"


def format_sci(x: float) -> str:
    """4 significant figures as ``d.ddd×10^e``."""
    e = _exponent(x)
    return f"{_mantissa(x, e)}×10^{e}"


def _rows(report: AnalysisReport):
    if not report.stats:
        raise ValueError("report has no rows")
    return sorted(report.stats, key=lambda s: (s.base, s.k))


def render_table(report: AnalysisReport, fmt: str = "markdown") -> str:
    """The variance table, one row per (base, k), in CSV or Markdown."""
    rows = _rows(report)
    fmt = fmt.lower()
    if fmt == "markdown":
        out = ["| " + " | ".join(TABLE_COLUMNS) + " |", "|" + "---|" * len(TABLE_COLUMNS)]
        for s in rows:
            e = _exponent(s.predicted_variance)
            pred = (
                f"({_mantissa(s.predicted_variance, e)} ± "
                f"{_mantissa(s.predicted_error, e)})×10^{e}"
            )
            out.append(
                f"| {s.base} | {s.k} | {pred} | {format_sci(s.actual_variance)} "
                f"| {s.deviation_sigma:.3f} |"
            )
        return "\n".join(out) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for s in rows:
            e = _exponent(s.predicted_variance)
            ea = _exponent(s.actual_variance)
            w.writerow([
                s.base, s.k,
                f"{_mantissa(s.predicted_variance, e)}e{e}",
                f"{_mantissa(s.predicted_error, e)}e{e}",
                f"{_mantissa(s.actual_variance, ea)}e{ea}",
                f"{s.deviation_sigma:.3f}",
            ])
        return buf.getvalue()
    raise ValueError(f"unknown table format {fmt!r}")


def parse_table_csv(text: str) -> List[dict]:
    """Read back :func:`render_table` CSV output."""
    rows = []
    for r in csv.DictReader(io.StringIO(text)):
        rows.append({
            "base": int(r["base"]), "length": int(r["length"]),
            **{c: float(r[c]) for c in CSV_COLUMNS[2:]},
        })
    return rows


def render_histogram_csv(h: HistogramData) -> str:
    """Bin rows (including the two overflow bins) and the sigma guide lines."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bin_lo", "bin_hi", "occupancy"])
    w.writerow(["-inf", repr(float(h.edges[0])), h.underflow])
    for lo, hi, n in zip(h.edges[:-1], h.edges[1:], h.occupancy):
        w.writerow([repr(float(lo)), repr(float(hi)), int(n)])
    w.writerow([repr(float(h.edges[-1])), "inf", h.overflow])
    w.writerow([])
    w.writerow(["guide", "frequency"])
    for name, x in zip(("p-2sigma", "p-sigma", "p+sigma", "p+2sigma"), h.guide_lines):
        w.writerow([name, repr(x)])
    return buf.getvalue()


def report_document(report: AnalysisReport) -> dict:
    """Full-precision machine-readable form of a report."""
    return {
        "label": report.label,
        "tool_version": report.tool_version,
        "input_checksum": report.input_checksum,
        "digit_counts": {str(b): n for b, n in sorted(report.digit_counts.items())},
        "stats": [
            {
                "base": s.base, "k": s.k, "m": s.m, "M": s.M, "p": s.p,
                "predicted_variance": s.predicted_variance,
                "predicted_error": s.predicted_error,
                "actual_variance": s.actual_variance,
                "deviation_sigma": s.deviation_sigma,
                "min_frequency": s.min_frequency, "min_label": s.min_label,
                "max_frequency": s.max_frequency, "max_label": s.max_label,
            }
            for s in _rows(report)
        ],
        "histograms": [
            {
                "base": h.base, "k": h.k, "p": h.p, "sigma": h.sigma,
                "edges": [float(x) for x in h.edges],
                "occupancy": [int(x) for x in h.occupancy],
                "underflow": h.underflow, "overflow": h.overflow,
                "guide_lines": list(h.guide_lines),
            }
            for h in sorted(report.histograms, key=lambda h: (h.base, h.k))
        ],
    }


def render_structured(report: AnalysisReport) -> str:
    return json.dumps(report_document(report), indent=2, sort_keys=True) + "\n"


def render(report: AnalysisReport, fmt: str) -> str:
    if fmt == "structured":
        return render_structured(report)
    return render_table(report, fmt)


def build_report(
    tables: Sequence[KGramCounts], label: str, checksum: str = "", bins: int = 32
) -> AnalysisReport:
    """Stats and histograms for a set of count tables."""
    digit_counts: Dict[int, int] = {}
    for t in tables:
        n = digit_counts.setdefault(t.base, t.digit_count)
        if n != t.digit_count:
            raise ValueError(
                f"base {t.base} tables disagree on the digit count ({n} vs {t.digit_count})"
            )
    ordered = sorted(tables, key=lambda t: (t.base, t.k))
    return AnalysisReport(
        label=label,
        digit_counts=digit_counts,
        stats=[compute_stats(t) for t in ordered],
        histograms=[histogram(t, bins) for t in ordered],
        input_checksum=checksum,
    )


# end-to-end run

@dataclass
class PipelineConfig:
    """Either ``constant`` + ``digits`` or ``input_path`` must be given.

    For a computed constant ``digits`` counts decimal digits; base b gets
    ceil(digits * log(10) / log(b)) digits, all emitted from one binary
    value.  A file is read in ``bases[0]``.
    """

    constant: Optional[ConstantId] = None
    digits: Optional[int] = None
    input_path: Optional[str] = None
    bases: Tuple[int, ...] = (10,)
    max_k: int = 3
    bins: int = 32
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK
    parse_mode: ParseMode = ParseMode.LENIENT
    label: str = ""


def digits_in_base(decimal_digits: int, base: int) -> int:
    if base == 10:
        return decimal_digits
    return math.ceil(decimal_digits * math.log(10) / math.log(base))


def _computed_digits(cid: ConstantId, digits: int, bases) -> Dict[int, str]:
    """Fractional digit text per base, recomputing with more digits if needed."""
    extra = 0
    for _ in range(4):
        value = compute_constant(cid, digits + extra).value
        try:
            return {
                b: emit_digits(value, b, digits_in_base(digits, b)).fractional for b in bases
            }
        except InsufficientPrecisionError:
            extra += 20
    raise InsufficientPrecisionError(f"could not certify {digits} digits of {cid.value}")


def collect_tables(config: PipelineConfig) -> Tuple[List[KGramCounts], str, str]:
    """The count tables of a run, with its label and input checksum."""
    bases = tuple(sorted(set(config.bases)))
    tables: List[KGramCounts] = []
    sha = hashlib.sha256()
    if config.constant is not None:
        if config.input_path is not None:
            raise ValueError("give either a constant or an input file, not both")
        if not config.digits or config.digits < 1:
            raise ValueError("a computed constant needs digits >= 1")
        cid = ConstantId(config.constant)
        label = config.label or cid.value
        texts = _computed_digits(cid, config.digits, bases)
        for b in bases:
            text = texts[b]
            sha.update(f"{b}:{text}\n".encode("ascii"))
            arr = decode_digits(text, b)
            chunks = (arr[i : i + config.chunk_size] for i in range(0, len(arr), config.chunk_size))
            tables.extend(count_all(chunks, b, config.max_k, workers=config.workers,
                                    source_label=label).values())
    elif config.input_path is not None:
        if len(bases) != 1:
            raise ValueError("a digit file has exactly one base")
        b = bases[0]
        label = config.label or str(config.input_path)
        with open(config.input_path, "rb") as fh:
            for block in iter(lambda: fh.read(1 << 20), b""):
                sha.update(block)
        stream = open_stream(config.input_path, b, config.parse_mode, chunk_size=config.chunk_size)
        tables.extend(count_all(stream, b, config.max_k, workers=config.workers,
                                source_label=label).values())
    else:
        raise ValueError("config needs a constant or an input file")
    return tables, label, sha.hexdigest()


def run_pipeline(config: PipelineConfig) -> AnalysisReport:
    """compute (or read) -> emit -> count -> stats -> report."""
    tables, label, checksum = collect_tables(config)
    return build_report(tables, label, checksum, config.bins)
