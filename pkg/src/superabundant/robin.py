"""Robin's inequality and the Gronwall-type upper bound as certified checks.

robin_check decides sigma(n)/n < e^gamma ln ln n with a certified sign and
reports n <= 5040 as exempt.  gronwall_bound_check certifies

    sigma(n)/n <= e^gamma ln ln n + C / ln ln n

where C is kept in its exact form (7/3 - e^gamma ln ln 12) ln ln 12; the
published decimal 0.648214 truncates C, and using the truncation would turn
the n = 12 equality case into a spurious strict violation at high precision.
n = 12 is therefore recognized structurally as the equality case.

A Violated verdict for n > 5040 would be a reportable research event;
counterexample_report packages it as a machine-readable document.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from gmpy2 import mpq

from .factored import FactoredInteger, format_factorization, sigma_over_n
from .intervals import (
    DEFAULT_POLICY,
    DomainError,
    Interval,
    Ordering,
    UndecidedComparisonError,
    exp_gamma_interval,
    iv_from_mpq,
    iv_mul,
    iv_sub,
)
from .factored import loglog_value

__all__ = [
    "RobinConstants",
    "RobinStatus",
    "RobinVerdict",
    "robin_check",
    "GronwallResult",
    "gronwall_bound_check",
    "robin_violators_upto",
    "counterexample_report",
]


@dataclass(frozen=True)
class RobinConstants:
    robin_threshold: int = 5040
    xa_anchor: int = 10080
    bound_constant: str = "0.648214"
    gamma_ref: str = "0.57721566"


CONSTANTS = RobinConstants()


class RobinStatus(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    EXEMPT = "exempt"


@dataclass(frozen=True)
class RobinVerdict:
    status: RobinStatus
    sign: Ordering            # LESS: sigma/n < e^gamma ln ln n
    margin: Interval          # enclosure of sigma(n)/n - e^gamma ln ln n
    precision_bits: int


def _small_value(f):
    """The integer value when modest, else None (no huge materialization)."""
    if f.bit_length_estimate() > 64:
        return None
    return int(f.to_int(max_bits=128))


def _robin_margin(f, ratio):
    def expr(bits):
        ll = loglog_value(f, bits + 8)
        eg = exp_gamma_interval(bits + 8)
        return iv_sub(iv_from_mpq(ratio, bits), iv_mul(eg, ll, bits + 8), bits)
    return expr


def robin_check(f, policy=DEFAULT_POLICY):
    """Certified verdict of sigma(n) < e^gamma n ln ln n; n >= 3 required."""
    if f.is_one() or f.factors == ((2, 1),):
        raise DomainError("robin_check requires n >= 3")
    ratio = sigma_over_n(f)
    expr = _robin_margin(f, ratio)
    bits = policy.start_bits
    while True:
        margin = expr(bits)
        if margin.hi < 0:
            sign = Ordering.LESS
            break
        if margin.lo > 0:
            sign = Ordering.GREATER
            break
        if bits >= policy.max_bits:
            raise UndecidedComparisonError(
                f"robin margin undecided for n = {format_factorization(f)}",
                margin=margin, bits=bits)
        bits = policy.next_bits(bits)
    small = _small_value(f)
    if small is not None and small <= CONSTANTS.robin_threshold:
        status = RobinStatus.EXEMPT
    elif sign is Ordering.LESS:
        status = RobinStatus.SATISFIED
    else:
        status = RobinStatus.VIOLATED
    return RobinVerdict(status, sign, margin, bits)


@dataclass(frozen=True)
class GronwallResult:
    holds: bool
    equality_case: bool
    margin: Interval          # enclosure of the scaled slack G(n) (<= 0 iff holds)
    precision_bits: int


_LL12_EXPR = FactoredInteger(((2, 2), (3, 1)))


def gronwall_bound_check(f, policy=DEFAULT_POLICY):
    """Certified check of the bound sigma(n)/n <= e^gamma L + C/L, L = ln ln n.

    Internally certifies the sign of G(n) = (sigma(n)/n) L - e^gamma L^2 - C
    (same sign as the raw slack since L > 0 for n >= 3).  At n = 12 the
    expression is identically zero by construction and is reported as the
    equality case without attempting to certify a sign that does not exist.
    """
    if f.is_one() or f.factors == ((2, 1),):
        raise DomainError("gronwall_bound_check requires n >= 3")
    if f.factors == _LL12_EXPR.factors:
        margin = iv_from_mpq(0, policy.start_bits)
        return GronwallResult(True, True, margin, policy.start_bits)
    ratio = sigma_over_n(f)

    def G(bits):
        w = bits + 8
        L = loglog_value(f, w)
        L12 = loglog_value(_LL12_EXPR, w)
        eg = exp_gamma_interval(w)
        term1 = iv_mul(iv_from_mpq(ratio, w), L, w)
        term2 = iv_mul(eg, iv_mul(L, L, w), w)
        c1 = iv_mul(iv_from_mpq(mpq(7, 3), w), L12, w)
        c2 = iv_mul(eg, iv_mul(L12, L12, w), w)
        # G = term1 - term2 - (c1 - c2)
        return iv_sub(iv_sub(term1, term2, w), iv_sub(c1, c2, w), bits)

    bits = policy.start_bits
    while True:
        margin = G(bits)
        if margin.hi < 0:
            return GronwallResult(True, False, margin, bits)
        if margin.lo > 0:
            return GronwallResult(False, False, margin, bits)
        if bits >= policy.max_bits:
            raise UndecidedComparisonError(
                f"gronwall margin undecided for n = {format_factorization(f)}",
                margin=margin, bits=bits)
        bits = policy.next_bits(bits)


def _sigma_segment(lo, hi):
    """sigma(n) for n in [lo, hi] via a segmented divisor sieve."""
    import numpy as np
    seg = np.zeros(hi - lo + 1, dtype=np.int64)
    for d in range(1, hi + 1):
        first = ((lo + d - 1) // d) * d
        if first > hi:
            if d > hi:
                break
            continue
        seg[first - lo:: d] += d
    return seg


def _violator_candidates(lo, hi):
    """Float prescreen of [lo, hi]: n with sigma(n) near or over the bound."""
    import numpy as np
    s = _sigma_segment(lo, hi)
    n = np.arange(lo, hi + 1, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        rhs = 1.7810724179901979 * np.log(np.log(n)) * n
    return [int(k) + lo for k in np.flatnonzero(s >= rhs * (1 - 1e-9))]


def robin_violators_upto(bound, policy=DEFAULT_POLICY, workers=1):
    """All n >= 3 up to `bound` with sigma(n) >= e^gamma n ln ln n.

    Brute-force scan: a float prescreen marks candidates near or over the
    threshold, each then certified.  workers > 1 shards the range into
    segments scanned independently; the merge is order-deterministic, so the
    result is identical for any worker count.
    """
    if bound > 10 ** 7:
        raise ValueError("bound capped at 1e7")
    if bound < 3:
        return []
    workers = max(1, int(workers))
    chunk = max(1000, (bound - 2) // workers + 1)
    ranges = [(lo, min(lo + chunk - 1, bound))
              for lo in range(3, bound + 1, chunk)]
    if workers > 1 and len(ranges) > 1:
        import multiprocessing
        with multiprocessing.Pool(min(workers, len(ranges))) as pool:
            chunks = pool.starmap(_violator_candidates, ranges)
    else:
        chunks = [_violator_candidates(lo, hi) for lo, hi in ranges]
    out = []
    for cand in chunks:
        for k in cand:
            if k < 3:
                continue
            f = FactoredInteger.from_int(k)
            verdict = robin_check(f, policy)
            if verdict.sign is not Ordering.LESS:
                out.append(k)
    return out


def counterexample_report(f, verdict, library_version="unknown"):
    """Machine-readable description of a Robin violation above the threshold."""
    lo, hi = verdict.margin.as_dyadic_strings()
    return {
        "report": "robin-counterexample",
        "factorization": format_factorization(f),
        "margin_dyadic": {"lo": lo, "hi": hi},
        "margin_decimal": {
            "lo": float(verdict.margin.lo),
            "hi": float(verdict.margin.hi),
        },
        "precision_bits": verdict.precision_bits,
        "library_version": library_version,
    }
