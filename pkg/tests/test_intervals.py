"""Certified interval arithmetic: enclosure correctness, the audited gamma
literal, and comparison soundness."""
import math
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from superabundant.factored import FactoredInteger, loglog_value, quality
from superabundant.intervals import (
    Ordering,
    PrecisionPolicy,
    compare_certified,
    constants_gamma,
    exp_gamma_interval,
    gamma_interval,
    iv_add,
    iv_div,
    iv_from_mpq,
    iv_log,
    iv_mul,
    iv_sub,
    _GAMMA_DIGITS,
)


class TestGammaLiteral:
    def test_literal_matches_mpfr_const_euler(self):
        digits = "".join(_GAMMA_DIGITS)
        with gmpy2.context(precision=5100):
            ref = gmpy2.const_euler()
        mant, exp, _ = gmpy2.digits(ref, 10, 1510)
        assert exp == 0
        assert mant[:1500] == digits

    def test_literal_matches_mpmath(self):
        digits = "".join(_GAMMA_DIGITS)
        mpmath.mp.dps = 1520
        ref = mpmath.nstr(mpmath.mp.euler, 1510, strip_zeros=False)
        assert ref.replace("0.", "")[:1500] == digits
        mpmath.mp.dps = 15

    def test_gamma_contains_published_value(self):
        iv = gamma_interval(64)
        assert iv.contains(mpq(57721566, 10 ** 8)) or (
            float(iv.lo) <= 0.57721566 <= float(iv.hi) or
            abs(float(iv.midpoint()) - 0.57721566) < 1e-8)
        # the published 8-digit value rounds the true constant
        assert abs(float(iv.midpoint()) - 0.57721566) < 5e-9

    def test_exp_gamma_against_oracle(self):
        mpmath.mp.dps = 40
        ref = mpmath.exp(mpmath.euler)
        iv = exp_gamma_interval(64)
        assert float(iv.lo) <= float(ref) <= float(iv.hi)
        assert float(iv.width()) < 1e-15
        mpmath.mp.dps = 15

    def test_refinement_nesting(self):
        coarse = gamma_interval(64)
        fine = gamma_interval(128)
        assert coarse.encloses(fine)
        g64, e64 = constants_gamma(64)
        g128, e128 = constants_gamma(128)
        assert g64.encloses(g128)
        assert e64.encloses(e128)


class TestIntervalOps:
    def test_invalid_interval_rejected(self):
        from superabundant.intervals import Interval
        with gmpy2.context(precision=64):
            a = gmpy2.mpfr(2)
            b = gmpy2.mpfr(1)
        with pytest.raises(ValueError):
            Interval(a, b, 64)

    def test_add_sub_mul_div_enclose(self):
        a = iv_from_mpq(mpq(1, 3), 64)
        b = iv_from_mpq(mpq(2, 7), 64)
        s = iv_add(a, b, 64)
        assert s.contains(mpq(1, 3) + mpq(2, 7))
        d = iv_sub(a, b, 64)
        assert d.contains(mpq(1, 3) - mpq(2, 7))
        m = iv_mul(a, b, 64)
        assert m.contains(mpq(2, 21))
        q = iv_div(a, b, 64)
        assert q.contains(mpq(7, 6))

    def test_div_by_zero_straddling(self):
        a = iv_from_mpq(1, 64)
        z = iv_sub(a, a, 64)
        with pytest.raises(ZeroDivisionError):
            iv_div(a, z, 64)

    def test_log_enclosure_against_oracle(self):
        mpmath.mp.dps = 40
        for n in (2, 3, 16, 10080):
            iv = iv_log(iv_from_mpq(n, 96), 96)
            ref = mpmath.log(n)
            assert float(iv.lo) <= float(ref) <= float(iv.hi)
        mpmath.mp.dps = 15

    def test_width_halves_with_precision(self):
        from superabundant.factored import log_value
        f = FactoredInteger.from_int(10080)
        for fn in (log_value, loglog_value, quality):
            w_prev = None
            for bits in (64, 128, 256):
                w = float(fn(f, bits).width())
                if w_prev is not None and w > 0:
                    assert w <= w_prev / 2
                w_prev = w

    def test_enclosures_nest_at_4x_bits(self):
        from superabundant.factored import log_value
        f = FactoredInteger.from_int(10080)
        for fn in (log_value, loglog_value, quality):
            coarse = fn(f, 64)
            fine = fn(f, 256)
            assert coarse.encloses(fine)


class TestCompareCertified:
    def test_equal_rationals(self):
        assert compare_certified(mpq(7, 3), mpq(7, 3)) is Ordering.EQUAL
        assert compare_certified(Fraction(7, 3), mpq(14, 6)) is Ordering.EQUAL

    def test_rational_vs_transcendental_examples(self):
        # sigma(12)/12 = 7/3 vs e^gamma ln ln 12 ~ 1.6212 (oracle below)
        f12 = FactoredInteger.from_int(12)

        def rhs(bits):
            return iv_mul(exp_gamma_interval(bits),
                          loglog_value(f12, bits), bits)

        assert compare_certified(mpq(7, 3), rhs) is Ordering.GREATER
        mpmath.mp.dps = 30
        oracle = mpmath.exp(mpmath.euler) * mpmath.log(mpmath.log(12))
        assert abs(float(oracle) - 1.62120) < 1e-4
        mpmath.mp.dps = 15

    def test_robin_sides_at_5041(self):
        # 5041 = 71^2, sigma = 1 + 71 + 5041 = 5113 (brute divisor sum)
        assert sum(d for d in range(1, 5042) if 5041 % d == 0) == 5113
        f = FactoredInteger.from_int(5041)

        def rhs(bits):
            return iv_mul(exp_gamma_interval(bits),
                          loglog_value(f, bits), bits)

        assert compare_certified(mpq(5113, 5041), rhs) is Ordering.LESS

    def test_undecided_for_identical_reals(self):
        # ln 4 and 2 ln 2 are the same real approached via different
        # expressions: no precision separates them
        four = iv_from_mpq(4, 512)

        def lhs(bits):
            return iv_log(iv_from_mpq(4, bits), bits)

        def rhs(bits):
            two = iv_log(iv_from_mpq(2, bits), bits)
            return iv_add(two, two, bits)

        policy = PrecisionPolicy(start_bits=64, max_bits=256)
        assert compare_certified(lhs, rhs, policy) is Ordering.UNDECIDED

    @given(st.fractions(), st.fractions())
    @settings(max_examples=300, deadline=None)
    def test_never_disagrees_with_exact_order(self, a, b):
        got = compare_certified(a, b)
        if a < b:
            assert got is Ordering.LESS
        elif a > b:
            assert got is Ordering.GREATER
        else:
            assert got is Ordering.EQUAL

    @given(st.fractions(), st.fractions())
    @settings(max_examples=100, deadline=None)
    def test_antisymmetry(self, a, b):
        fwd = compare_certified(a, b)
        rev = compare_certified(b, a)
        flip = {Ordering.LESS: Ordering.GREATER,
                Ordering.GREATER: Ordering.LESS,
                Ordering.EQUAL: Ordering.EQUAL}
        assert rev is flip[fwd]


class TestPolicy:
    def test_validation(self):
        with pytest.raises(ValueError):
            PrecisionPolicy(start_bits=32)
        with pytest.raises(ValueError):
            PrecisionPolicy(start_bits=128, max_bits=64)
        with pytest.raises(ValueError):
            PrecisionPolicy(growth_factor=Fraction(1))

    def test_next_bits_monotone(self):
        p = PrecisionPolicy()
        b = p.start_bits
        seen = [b]
        while b < p.max_bits:
            b = p.next_bits(b)
            assert b > seen[-1]
            seen.append(b)
        assert seen[-1] == p.max_bits
