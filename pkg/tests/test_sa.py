"""Superabundant enumeration: oracle agreement, invariants, determinism."""
import os

import pytest

from oracle_primorial import sa_upto as primorial_sa_upto
from superabundant.factored import format_factorization, is_sa_shape, sigma_over_n
from superabundant.intervals import PrecisionPolicy
from superabundant.primes import primes_first
from superabundant.sa import (
    FrontierEnumerator,
    SaEnumerator,
    brute_force_sa_upto,
    enumerate_sa,
    verify_sa_prefix,
)

FIXTURE = os.path.join(os.path.dirname(__file__), "fixtures",
                       "sa_first_1000.txt")


def load_fixture_1000():
    out = []
    with open(FIXTURE) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(line)
    return out


class TestOracleAgreement:
    def test_first_ten(self, sa_records_1000):
        vals = [int(r.number.to_int()) for r in sa_records_1000[:10]]
        assert vals == [1, 2, 4, 6, 12, 24, 36, 48, 60, 120]

    def test_twentieth_is_10080(self, sa_records_1000):
        assert int(sa_records_1000[19].number.to_int()) == 10080

    def test_brute_force_prefix(self, sa_records_1000, brute_sa_1e6):
        vals = [int(r.number.to_int()) for r in sa_records_1000[:len(brute_sa_1e6)]]
        assert vals == brute_sa_1e6
        assert brute_sa_1e6[-1] == 720720

    def test_primorial_oracle_prefix(self, sa_records_1000):
        oracle = primorial_sa_upto(10 ** 25)
        vals = []
        for r in sa_records_1000:
            if r.number.bit_length_estimate() > 90:
                break
            v = int(r.number.to_int(max_bits=120))
            if v > 10 ** 25:
                break
            vals.append(v)
        assert vals == oracle

    def test_frontier_agreement(self, sa_records_1000):
        frontier = [r.number.factors
                    for r in enumerate_sa(100, algorithm="frontier")]
        ours = [r.number.factors for r in sa_records_1000[:100]]
        assert frontier == ours

    def test_fixture_1000(self, sa_records_1000):
        fixture = load_fixture_1000()
        got = [format_factorization(r.number) for r in sa_records_1000]
        assert got == fixture


class TestInvariants:
    def test_records_are_valid_candidates(self, sa_records_1000):
        from superabundant.sa import SaCandidate
        table = primes_first(100)
        for r in sa_records_1000[::53]:
            SaCandidate(r.number, table)   # raises on any shape violation

    def test_ratios_strictly_increase(self, sa_records_1000):
        for a, b in zip(sa_records_1000, sa_records_1000[1:]):
            assert b.ratio > a.ratio

    def test_values_strictly_increase(self, sa_records_1000):
        for a, b in zip(sa_records_1000[:300], sa_records_1000[1:301]):
            assert a.number.compare_value(b.number) == -1

    def test_shapes_are_sa_candidates(self, sa_records_1000):
        table = primes_first(100)
        for r in sa_records_1000:
            assert is_sa_shape(r.number, table)

    def test_ratio_field_matches_sigma(self, sa_records_1000):
        for r in sa_records_1000[::97]:
            assert r.ratio == sigma_over_n(r.number)

    def test_quality_present_from_third_record(self, sa_records_1000):
        assert sa_records_1000[0].quality is None
        assert sa_records_1000[1].quality is None
        for r in sa_records_1000[2:50]:
            assert r.quality is not None
            assert r.quality.strictly_positive()

    def test_log_intervals_certify(self, sa_records_1000):
        import mpmath
        mpmath.mp.dps = 50
        for r in sa_records_1000[2:40]:
            ref = mpmath.log(int(r.number.to_int()))
            assert float(r.log_n.lo) <= float(ref) <= float(r.log_n.hi)
        mpmath.mp.dps = 15


class TestDeterminism:
    def test_independent_of_precision(self, sa_records_1000):
        alt = list(enumerate_sa(
            300, policy=PrecisionPolicy(start_bits=512, max_bits=8192)))
        assert [r.number.factors for r in alt] == \
            [r.number.factors for r in sa_records_1000[:300]]

    def test_resume_reproduces_stream(self, sa_records_1000):
        want = [r.number.factors for r in sa_records_1000[:400]]
        for cut in (23, 199, 398):
            en = SaEnumerator()
            got = []
            for rec in en:
                got.append(rec.number.factors)
                if rec.index >= cut:
                    break
            resumed = SaEnumerator.from_state(en.state())
            for rec in resumed:
                got.append(rec.number.factors)
                if rec.index >= 400:
                    break
            assert got == want


class TestVerifyPrefix:
    def test_bound_one(self, sa_records_1000):
        rep = verify_sa_prefix(sa_records_1000, 1)
        assert rep["mismatches"] == []
        assert rep["compared"] == 1

    def test_bound_1e4(self, sa_records_1000):
        rep = verify_sa_prefix(sa_records_1000, 10 ** 4)
        assert rep["mismatches"] == []
        assert rep["generated_in_range"] == rep["compared"]

    def test_bound_1e6(self, sa_records_1000):
        rep = verify_sa_prefix(sa_records_1000, 10 ** 6)
        assert rep["mismatches"] == []
        assert rep["compared"] == 31

    def test_detects_corruption(self, sa_records_1000):
        broken = list(sa_records_1000[:10])
        broken[4], broken[5] = broken[5], broken[4]
        rep = verify_sa_prefix(broken, 10 ** 3)
        assert rep["mismatches"]


@pytest.mark.slow
class TestSlowCrossChecks:
    def test_brute_force_1e7_prefix(self):
        brute = brute_force_sa_upto(10 ** 7)
        vals = [int(r.number.to_int()) for r in enumerate_sa(len(brute))]
        assert vals == brute

    def test_primorial_oracle_1e40(self, sa_records_1000):
        oracle = primorial_sa_upto(10 ** 40)
        vals = []
        for r in sa_records_1000:
            if r.number.bit_length_estimate() > 140:
                break
            v = int(r.number.to_int(max_bits=160))
            if v > 10 ** 40:
                break
            vals.append(v)
        assert vals == oracle

    def test_frontier_agreement_150(self, sa_records_1000):
        frontier = [r.number.factors
                    for r in enumerate_sa(150, algorithm="frontier")]
        assert frontier == [r.number.factors for r in sa_records_1000[:150]]
