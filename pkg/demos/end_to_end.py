"""
End to end
==========

Compute, emit in both bases, count, and tabulate, for both constants.
"""

import time

from digitnorm.constants import ConstantId
from digitnorm.report import PipelineConfig, render, run_pipeline

DIGITS = 200_000

for cid in (ConstantId.CATALAN, ConstantId.LEMNISCATE_ARC):
    t = time.perf_counter()
    report = run_pipeline(PipelineConfig(constant=cid, digits=DIGITS, bases=(10, 16), max_k=3))
    print(f"## {report.label}: {report.digit_counts} digits, {time.perf_counter() - t:.1f} s")
    print(render(report, "markdown"))
