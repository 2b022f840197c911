"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured
quantity, then asserts.  Run ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py`` for just these lines.
"""

import math
import os
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from digitnorm.constants import (  # noqa: E402
    ConstantId,
    bits_for_digits,
    catalan,
    catalan_defining_accelerated,
    lemniscate_family,
    lemniscate_integral_oracle,
)
from digitnorm.counts import count_all, count_kgrams, count_naive  # noqa: E402
from digitnorm.hpcore import hp_agm, hp_pi, hp_sqrt  # noqa: E402
from digitnorm.radix import convert_base, emit_digits  # noqa: E402
from digitnorm.report import (  # noqa: E402
    PipelineConfig,
    build_report,
    collect_tables,
    render,
    render_histogram_csv,
    run_pipeline,
)
from digitnorm.stats import deviation, fraction_within, predicted_error, predicted_variance  # noqa: E402
from digitnorm.stream import open_stream  # noqa: E402
from reference_tables import all_rows  # noqa: E402

_capsys = None


def verdict(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    if _capsys is not None:
        with _capsys.disabled():
            print("\n" + line, flush=True)
    else:
        print(line, flush=True)
    assert ok, line


@pytest.fixture(autouse=True)
def _show(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def frac(x):
    return x.to_fraction()


def digits_of_agreement(a: Fraction, b: Fraction) -> float:
    r = abs(a - b) / abs(b)
    # math.log10 takes big integers, so no float underflow at 1000 digits
    return math.inf if r == 0 else math.log10(r.denominator) - math.log10(r.numerator)


# 1. predicted values and errors

def test_criterion_1_table_formulas():
    t0 = time.perf_counter()
    bad = []
    for label, b, k, N, pred, err, _, _, e in all_rows():
        pv = predicted_variance(b, k, N)
        pe = predicted_error(pv, b ** k)
        # 4 significant figures for the value, the displayed 3 decimals for the error
        if f"{pv / 10.0 ** e:.3f}" != f"{pred:.3f}" or f"{pe / 10.0 ** e:.3f}" != f"{err:.3f}":
            bad.append((label, b, k, pv, pe))
    dt = time.perf_counter() - t0
    verdict(1, not bad and dt < 1.0,
            f"{12 - len(bad)}/12 predicted (value ± error) entries reproduced in {dt * 1e3:.1f} ms"
            + (f"; mismatches {bad}" if bad else ""))


# 2. deviations from rounded triples

def test_criterion_2_deviations():
    t0 = time.perf_counter()
    worst = 0.0
    for *_, pred, err, act, dev, e in all_rows():
        got = deviation(pred * 10.0 ** e, err * 10.0 ** e, act * 10.0 ** e)
        worst = max(worst, abs(got - dev))
    dt = time.perf_counter() - t0
    verdict(2, worst <= 0.02 and dt < 1.0,
            f"12/12 deviations, worst |difference| {worst:.4f} sigma (tolerance 0.02), "
            f"{dt * 1e3:.1f} ms")


# 3. constant correctness at 1000 digits

def test_criterion_3_constants():
    t0 = time.perf_counter()
    n = 1000
    g = catalan(n, verify=True)
    s = lemniscate_family(n)[0]
    assert s.id is ConstantId.LEMNISCATE_ARC
    g_digits = emit_digits(g.value, 10, n).fractional

    # first 30 digits against the accelerated defining series, with its bound
    est, bound = catalan_defining_accelerated(30)
    prefix = Fraction(int(g_digits[:30]), 10 ** 30)
    ok30 = prefix <= est + bound and est - bound < prefix + Fraction(1, 10 ** 30)

    # all 1000 digits against an independent recompute with more precision
    hi = emit_digits(catalan(n + 50).value, 10, n + 40).fractional
    ok1000 = hi[:n] == g_digits

    # s * AGM(1, sqrt 2) = 2 pi
    prec = bits_for_digits(n) + 64
    agm = frac(hp_agm(1, hp_sqrt(2, prec), prec))
    lhs = frac(s.value) * agm
    agree = digits_of_agreement(lhs, 2 * frac(hp_pi(prec)))
    dt = time.perf_counter() - t0
    verdict(3, ok30 and ok1000 and agree >= 990 and dt < 10,
            f"G 30-digit oracle {'ok' if ok30 else 'MISMATCH'} (bound {float(bound):.1e}), "
            f"1000-digit recompute {'ok' if ok1000 else 'MISMATCH'}, "
            f"s*AGM = 2pi to {min(agree, 9999):.0f} digits, {dt:.2f} s")


# 4. quadrature cross-check

def test_criterion_4_integral():
    t0 = time.perf_counter()
    q = frac(lemniscate_integral_oracle(10))
    s = frac(lemniscate_family(20)[0].value)
    agree = digits_of_agreement(4 * q, s)
    dt = time.perf_counter() - t0
    verdict(4, agree >= 8 and dt < 5,
            f"4 * integral = s to {agree:.1f} digits (need 8); the half-arc L = s/2 is twice "
            f"the integral, {dt:.2f} s")


# 5. radix path independence

def test_criterion_5_radix():
    t0 = time.perf_counter()
    n = 10 ** 4
    m = math.ceil(n * math.log(16) / math.log(10)) + 8
    g = catalan(m + 10).value
    direct = emit_digits(g, 16, n)
    via_decimal = convert_base(emit_digits(g, 10, m), 16, n)
    dt = time.perf_counter() - t0
    ok = direct == via_decimal and direct.fractional[:8] == "EA7CB89F"
    verdict(5, ok and dt < 5,
            f"10^4 hex digits direct == converted from {m} decimal digits: "
            f"{direct == via_decimal}, prefix {direct.fractional[:8]}, {dt:.2f} s")


# 6. counter correctness

def test_criterion_6_counter():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    cases = mismatches = bad_sums = 0
    for _ in range(1000):
        b = int(rng.choice([10, 16]))
        k = int(rng.integers(1, 4))
        N = int(rng.integers(k, 10 ** 4 + 1))
        digits = rng.integers(0, b, N).astype(np.uint8)
        fast = count_kgrams(digits, b, k)
        mismatches += fast != count_naive(digits, b, k)
        bad_sums += int(fast.counts.sum()) != N - k + 1
        cases += 1
    variants = 0
    digits = rng.integers(0, 16, 50_000).astype(np.uint8)
    ref = count_all(digits, 16, 3)
    for size in (1, 7, 4096, 1 << 20):
        for workers in (1, 2, 8):
            chunks = [digits[i : i + size] for i in range(0, len(digits), size)]
            got = count_all(chunks, 16, 3, workers=workers)
            variants += 1
            mismatches += any(got[k] != ref[k] for k in (1, 2, 3))
            bad_sums += any(int(got[k].counts.sum()) != len(digits) - k + 1 for k in (1, 2, 3))
    dt = time.perf_counter() - t0
    verdict(6, cases >= 1000 and mismatches == 0 and bad_sums == 0 and dt < 60,
            f"{cases} random streams + {variants} chunk/worker variants, {mismatches} mismatches, "
            f"{bad_sums} bad sums, {dt:.1f} s")


# 7. desk-scale substitute for the published runs

def test_criterion_7_pipeline_million_digits():
    t0 = time.perf_counter()
    details = []
    ok = True
    for cid in (ConstantId.CATALAN, ConstantId.LEMNISCATE_ARC):
        tables, label, checksum = collect_tables(
            PipelineConfig(constant=cid, digits=10 ** 6, bases=(10, 16), max_k=3))
        report = build_report(tables, label, checksum)
        worst = max(abs(s.deviation_sigma) for s in report.stats)
        masses = {t.base: fraction_within(t) for t in tables if t.k == 2}
        ok &= worst <= 5 and all(abs(v - 0.68) <= 0.15 for v in masses.values())
        details.append(
            f"{cid.value}: max|dev| {worst:.2f}, k=2 1-sigma mass "
            + ", ".join(f"b{b} {100 * v:.0f}%" for b, v in sorted(masses.items()))
        )
    dt = time.perf_counter() - t0
    verdict(7, ok and dt < 300, "; ".join(details) + f"; {dt:.0f} s")


# 8. throughput

@pytest.mark.slow
def test_criterion_8_throughput(tmp_path):
    path = tmp_path / "synthetic.txt"
    rng = np.random.default_rng(8)
    n, block = 10 ** 9, 10 ** 7
    with open(path, "wb") as fh:
        fh.write(b"0.")
        for _ in range(n // block):
            fh.write((rng.integers(0, 10, block, dtype=np.uint8) + 48).tobytes())
    try:
        t0 = time.perf_counter()
        tables = count_all(open_stream(path, 10), 10, 3, workers=4)
        dt = time.perf_counter() - t0
    finally:
        path.unlink()
    ok = all(tables[k].total_positions == n - k + 1 for k in (1, 2, 3))
    verdict(8, ok and dt < 120,
            f"10^9-digit file, k=1..3, 4 workers on {os.cpu_count()} CPU(s): {dt:.1f} s "
            f"(limit 120 s)")


# 9. report determinism

def test_criterion_9_determinism():
    outputs = []
    for workers in (1, 4):
        r = run_pipeline(PipelineConfig(constant=ConstantId.CATALAN, digits=10 ** 5,
                                        bases=(10, 16), workers=workers))
        texts = [render(r, f).encode() for f in ("markdown", "csv", "structured")]
        texts += [render_histogram_csv(h).encode() for h in r.histograms]
        outputs.append(texts)
    same = outputs[0] == outputs[1]
    verdict(9, same, f"workers 1 vs 4: {len(outputs[0])} rendered outputs byte-identical: {same}")


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
