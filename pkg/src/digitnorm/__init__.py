"""Digit statistics for Catalan's constant and the lemniscate constants.

Compute the constants to arbitrary precision, emit their decimal and
hexadecimal expansions, count overlapping digit sequences and compare the
spread of their frequencies with the binomial prediction for a normal number.
"""

__version__ = "0.1.0"

from .constants import (
    ConstantId,
    ConstantValue,
    catalan,
    catalan_defining_partial,
    compute_constant,
    lemniscate_family,
    lemniscate_integral_oracle,
)
from .counts import KGramCounts, count_all, count_kgrams, count_naive, marginalize, merge_counts
from .errors import (
    DigitNormError,
    DomainError,
    InsufficientPrecisionError,
    MalformedSeriesError,
    StreamFormatError,
    ValidationError,
)
from .hpcore import HPNumber, SeriesSpec, binary_split, hp_agm, hp_ln, hp_pi, hp_sqrt
from .radix import DigitString, convert_base, digits_to_value, emit_digits
from .report import AnalysisReport, PipelineConfig, render_histogram_csv, render_table, run_pipeline
from .stats import (
    FrequencyStats,
    HistogramData,
    actual_variance,
    compute_stats,
    deviation,
    frequencies,
    histogram,
    per_gram_z,
    predicted_error,
    predicted_variance,
)
from .stream import DigitStreamHeader, ParseMode, open_stream, validate_stream, write_stream
