import random
from decimal import Decimal, getcontext
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from digitnorm.errors import DomainError, MalformedSeriesError
from digitnorm.hpcore import (
    HPNumber,
    SeriesSpec,
    _isqrt,
    binary_split,
    guard_bits,
    hp_agm,
    hp_ln,
    hp_pi,
    hp_sqrt,
)


def frac(x: HPNumber) -> Fraction:
    return x.to_fraction()


def machin_pi(bits: int) -> Fraction:
    """pi = 16 atan(1/5) - 4 atan(1/239), summed until the tail is < 2**-(bits+8)."""

    def atan_inv(n):
        total, k = Fraction(0), 0
        while True:
            term = Fraction(1, (2 * k + 1) * n ** (2 * k + 1))
            total += -term if k & 1 else term
            if term < Fraction(1, 2 ** (bits + 8)):
                return total
            k += 1

    return 16 * atan_inv(5) - 4 * atan_inv(239)


def ln2_atanh(digits: int) -> Fraction:
    """ln 2 = 2 atanh(1/3) = 2 sum 1/((2k+1) 3**(2k+1))."""
    total, k = Fraction(0), 0
    while True:
        term = Fraction(2, (2 * k + 1) * 3 ** (2 * k + 1))
        total += term
        if term < Fraction(1, 10 ** (digits + 5)):
            return total
        k += 1


# HPNumber plumbing

def test_zero_iff_sign_zero():
    with pytest.raises(ValueError):
        HPNumber(1, 0, 4)
    with pytest.raises(ValueError):
        HPNumber(0, 3, 4)
    assert HPNumber.zero().sign == 0


def test_from_fraction_truncates_toward_zero():
    assert frac(HPNumber.from_fraction(Fraction(1, 3), 4)) == Fraction(5, 16)
    assert frac(HPNumber.from_fraction(Fraction(-1, 3), 4)) == Fraction(-5, 16)
    assert HPNumber.from_fraction(Fraction(1, 2), 10).exact
    assert not HPNumber.from_fraction(Fraction(1, 3), 10).exact


def test_exact_arithmetic_and_ordering():
    a = HPNumber.from_fraction(Fraction(3, 4), 8)
    b = HPNumber.from_int(2, 3)
    assert frac(a + b) == Fraction(11, 4)
    assert frac(a - b) == Fraction(-5, 4)
    assert frac(a * b) == Fraction(3, 2)
    assert frac(a.half()) == Fraction(3, 8)
    assert a < b and b > a and a == HPNumber.from_fraction(Fraction(3, 4), 30)
    assert hash(a) == hash(HPNumber.from_fraction(Fraction(3, 4), 30))


# square root

def test_isqrt_matches_exact_integer_sqrt():
    rng = random.Random(7)
    import math

    for _ in range(2000):
        n = rng.getrandbits(rng.randint(1, 900))
        assert _isqrt(n) == math.isqrt(n)


def test_sqrt_perfect_square_and_zero():
    r = hp_sqrt(4, 64)
    assert r == 2 and r.exact
    assert hp_sqrt(0, 64) == 0


def test_sqrt2_128_bits_by_squaring():
    r = hp_sqrt(2, 128)
    assert abs(frac(r) ** 2 - 2) <= Fraction(1, 2 ** 128)
    assert r.scale >= 128 + guard_bits(128)
    with mpmath.workdps(40):
        assert str(mpmath.mpf(frac(r).numerator) / frac(r).denominator)[:20] == "1.414213562373095048"


def test_sqrt_negative_is_domain_error():
    with pytest.raises(DomainError):
        hp_sqrt(HPNumber.from_int(-1), 64)


def test_sqrt_random_inputs_square_back():
    rng = random.Random(11)
    bits = 96
    for _ in range(1000):
        x = HPNumber.from_fraction(Fraction(rng.randrange(1, 10 ** 12), 10 ** 6), 80)
        r = frac(hp_sqrt(x, bits))
        assert abs(r * r - frac(x)) <= Fraction(1, 2 ** bits) * max(1, frac(x))


# AGM

def test_agm_fixed_point_and_symmetry():
    assert hp_agm(1, 1, 64) == 1
    a, b = hp_sqrt(2, 200), HPNumber.from_fraction(Fraction(7, 3), 200)
    assert hp_agm(a, b, 150).fixed == hp_agm(b, a, 150).fixed


def test_agm_1_sqrt2_hand_iterated():
    getcontext().prec = 40
    a, b = Decimal(1), Decimal(2).sqrt()
    for _ in range(6):
        a, b = (a + b) / 2, (a * b).sqrt()
    expected = Fraction(str(+a))
    got = frac(hp_agm(1, hp_sqrt(2, 200), 128))
    assert abs(got - expected) < Fraction(1, 10 ** 30)
    assert str(+a)[:22] == "1.19814023473559220743"


def test_agm_rejects_nonpositive():
    with pytest.raises(DomainError):
        hp_agm(0, 1, 64)
    with pytest.raises(DomainError):
        hp_agm(1, HPNumber.from_int(-2), 64)


# pi

@pytest.mark.parametrize("bits", [8, 64, 256, 1000])
def test_pi_against_machin(bits):
    assert abs(frac(hp_pi(bits)) - machin_pi(bits)) <= Fraction(1, 2 ** bits)


def test_pi_64_reference_digits():
    v = frac(hp_pi(64))
    assert abs(v - Fraction("3.14159265358979323846")) < Fraction(1, 10 ** 19)


def test_pi_256_machin_margin():
    assert abs(frac(hp_pi(256)) - machin_pi(256)) < Fraction(1, 2 ** 200)


def test_pi_precision_self_consistency():
    lo, hi = hp_pi(300), hp_pi(900)
    assert abs(frac(lo) - frac(hi)) <= Fraction(1, 2 ** 300)


# natural log

def test_ln_one_is_zero():
    assert hp_ln(1, 64) == 0


def test_ln2_against_atanh_series():
    ref = ln2_atanh(40)
    assert abs(frac(hp_ln(2, 128)) - ref) < Fraction(1, 10 ** 37)
    assert str(float(ref))[:12] == "0.6931471805"


def test_ln_2_plus_sqrt3():
    x = hp_sqrt(3, 300) + 2
    got = frac(hp_ln(x, 128))
    with mpmath.workdps(50):
        ref = mpmath.log(2 + mpmath.sqrt(3))
        assert str(ref)[:22] == "1.31695789692481670862"
        assert abs(mpmath.mpf(got.numerator) / got.denominator - ref) < mpmath.mpf(2) ** -126


@pytest.mark.parametrize("x", [Fraction(1, 1000), Fraction(1, 3), Fraction(7, 5), Fraction(10 ** 9, 7)])
def test_ln_various_against_mpmath(x):
    hx = HPNumber.from_fraction(x, 600)
    got = frac(hp_ln(hx, 400))
    exact_in = frac(hx)
    with mpmath.workdps(160):
        ref = mpmath.log(mpmath.mpf(exact_in.numerator) / exact_in.denominator)
        assert abs(mpmath.mpf(got.numerator) / got.denominator - ref) < mpmath.mpf(2) ** -400


def test_ln_rejects_nonpositive():
    with pytest.raises(DomainError):
        hp_ln(0, 64)


# binary splitting

def _alt_inv_odd_squares(n):
    return SeriesSpec(p=lambda j: -(2 * j + 1) ** 2, q=lambda j: (2 * j + 3) ** 2,
                      first_term=1, start=0, stop=n)


def test_binary_split_single_term():
    spec = SeriesSpec(p=lambda n: 1, q=lambda n: 1, first_term=1, start=0, stop=1)
    r = binary_split(spec, 64)
    assert r == 1 and r.exact


def test_binary_split_exact_rational():
    r = binary_split(_alt_inv_odd_squares(3), 200)
    assert abs(frac(r) - Fraction(209, 225)) <= Fraction(1, 2 ** 200)


def test_binary_split_e_partial_sum():
    spec = SeriesSpec(p=lambda n: 1, q=lambda n: n + 1, first_term=1, start=0, stop=21)
    oracle = Fraction(0)
    term = Fraction(1)
    for n in range(21):
        oracle += term
        term /= n + 1
    got = frac(binary_split(spec, 100))
    assert abs(got - oracle) <= Fraction(1, 2 ** 100)
    assert abs(got - Fraction("2.718281828459045235")) < Fraction(1, 10 ** 17)


def test_binary_split_zero_denominator():
    spec = SeriesSpec(p=lambda n: 1, q=lambda n: n - 2, first_term=1, start=0, stop=5)
    with pytest.raises(MalformedSeriesError):
        binary_split(spec, 64)
    with pytest.raises(MalformedSeriesError):
        binary_split(_alt_inv_odd_squares(0), 64)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 400), leaf=st.integers(1, 40), seed=st.integers(0, 10 ** 6))
def test_binary_split_independent_of_split_points(n, leaf, seed):
    rng = random.Random(seed)
    spec = _alt_inv_odd_squares(n)
    base = binary_split(spec, 256)
    odd = binary_split(spec, 256, leaf_size=leaf, split=lambda a, b: rng.randint(a + 1, b - 1))
    assert base.fixed == odd.fixed and base.scale == odd.scale


@pytest.mark.parametrize("kernel", ["sqrt", "pi", "ln", "agm"])
def test_more_precision_keeps_leading_bits(kernel):
    fn = {
        "sqrt": lambda p: hp_sqrt(3, p),
        "pi": hp_pi,
        "ln": lambda p: hp_ln(HPNumber.from_fraction(Fraction(5, 7), 2000), p),
        "agm": lambda p: hp_agm(1, HPNumber.from_int(3), p),
    }[kernel]
    lo, hi = fn(200), fn(700)
    assert abs(frac(lo) - frac(hi)) <= Fraction(1, 2 ** 200)
