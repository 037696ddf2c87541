"""Robin inequality checks, the Gronwall-type bound, and the exemption set."""
import json
import os

import mpmath
import pytest
from gmpy2 import mpq

from superabundant.factored import FactoredInteger
from superabundant.intervals import (
    DomainError,
    Ordering,
    PrecisionPolicy,
    UndecidedComparisonError,
    exp_gamma_interval,
    iv_from_mpq,
    iv_mul,
    iv_sub,
)
from superabundant.factored import loglog_value
from superabundant.robin import (
    CONSTANTS,
    RobinStatus,
    counterexample_report,
    gronwall_bound_check,
    robin_check,
    robin_violators_upto,
)

FIXTURE = os.path.join(os.path.dirname(__file__), "fixtures",
                       "robin_violators_5040.json")


def fixture_violators():
    with open(FIXTURE) as fh:
        return json.load(fh)["violators"]


class TestRobinCheck:
    def test_5040_exempt_greater(self):
        v = robin_check(FactoredInteger.from_int(5040))
        assert v.status is RobinStatus.EXEMPT
        assert v.sign is Ordering.GREATER
        # sigma(5040) = 19344: margin is 19344/5040 - e^gamma ln ln 5040
        mpmath.mp.dps = 30
        oracle = (mpmath.mpf(19344) / 5040
                  - mpmath.exp(mpmath.euler) * mpmath.log(mpmath.log(5040)))
        assert abs(float(v.margin.midpoint()) - float(oracle)) < 1e-12
        mpmath.mp.dps = 15

    def test_10080_satisfied(self):
        v = robin_check(FactoredInteger.from_int(10080))
        assert v.status is RobinStatus.SATISFIED
        assert v.sign is Ordering.LESS

    def test_12_exempt_greater(self):
        v = robin_check(FactoredInteger.from_int(12))
        assert v.status is RobinStatus.EXEMPT
        assert v.sign is Ordering.GREATER

    def test_domain(self):
        with pytest.raises(DomainError):
            robin_check(FactoredInteger.one())
        with pytest.raises(DomainError):
            robin_check(FactoredInteger.from_int(2))

    def test_sa_records_above_5040_satisfy_robin(self, sa_records_1000):
        # the empirical content of Robin's criterion along S; a VIOLATED
        # verdict here would be a reportable research event
        for rec in sa_records_1000[20:]:
            v = robin_check(rec.number)
            assert v.status is RobinStatus.SATISFIED, rec.index

    def test_margin_against_200_digit_recomputation(self, sa_records_1000):
        import random
        rng = random.Random(20260808)
        sample = rng.sample(sa_records_1000[2:], 100)
        mpmath.mp.dps = 200
        eg = mpmath.exp(mpmath.euler)
        for rec in sample:
            v = robin_check(rec.number)
            L = mpmath.fsum(a * mpmath.log(p) for p, a in rec.number.factors)
            oracle = (mpmath.mpf(int(rec.ratio.numerator))
                      / int(rec.ratio.denominator) - eg * mpmath.log(L))
            assert (oracle > 0) == (v.sign is Ordering.GREATER)
        mpmath.mp.dps = 15


class TestGronwall:
    def test_equality_case_12(self):
        g = gronwall_bound_check(FactoredInteger.from_int(12))
        assert g.holds
        assert g.equality_case

    def test_equality_constant_value(self):
        # (sigma(12)/12 - e^gamma ln ln 12) ln ln 12 certified within 1e-5
        # of the published 0.648214
        f12 = FactoredInteger.from_int(12)
        bits = 128
        ll = loglog_value(f12, bits)
        eg = exp_gamma_interval(bits)
        inner = iv_sub(iv_from_mpq(mpq(7, 3), bits), iv_mul(eg, ll, bits), bits)
        c = iv_mul(inner, ll, bits)
        assert abs(float(c.lo) - 0.648214) < 1e-5
        assert abs(float(c.hi) - 0.648214) < 1e-5
        # 30-digit oracle agreement
        mpmath.mp.dps = 30
        oracle = ((mpmath.mpf(7) / 3
                   - mpmath.exp(mpmath.euler) * mpmath.log(mpmath.log(12)))
                  * mpmath.log(mpmath.log(12)))
        assert float(c.lo) <= float(oracle) <= float(c.hi)
        mpmath.mp.dps = 15

    def test_holds_for_small_n(self):
        for n in (3, 4, 10080, 5040, 720720):
            g = gronwall_bound_check(FactoredInteger.from_int(n))
            assert g.holds
            if n != 12:
                assert not g.equality_case

    def test_domain(self):
        with pytest.raises(DomainError):
            gronwall_bound_check(FactoredInteger.from_int(2))


class TestViolators:
    def test_fixture_and_examples(self):
        got = robin_violators_upto(5040)
        assert got == fixture_violators()
        assert max(got) == 5040
        assert 12 in got and 5040 in got
        assert 7 not in got

    def test_no_violators_between_5040_and_1e5(self):
        got = robin_violators_upto(100000)
        assert got == fixture_violators()

    def test_small_bounds(self):
        assert robin_violators_upto(2) == []
        assert robin_violators_upto(3) == [3]

    def test_worker_count_does_not_change_output(self):
        one = robin_violators_upto(30000, workers=1)
        two = robin_violators_upto(30000, workers=2)
        assert one == two


class TestReports:
    def test_counterexample_report_shape(self):
        # fabricate the artifact from a known exempt "violation" (n = 12)
        f = FactoredInteger.from_int(12)
        v = robin_check(f)
        rep = counterexample_report(f, v, library_version="test")
        assert rep["report"] == "robin-counterexample"
        assert rep["factorization"] == "2^2*3"
        assert rep["precision_bits"] == v.precision_bits
        assert rep["margin_decimal"]["lo"] <= rep["margin_decimal"]["hi"]
        json.dumps(rep)

    def test_constants(self):
        assert CONSTANTS.robin_threshold == 5040
        assert CONSTANTS.xa_anchor == 10080
        assert CONSTANTS.bound_constant == "0.648214"
        assert CONSTANTS.gamma_ref == "0.57721566"
