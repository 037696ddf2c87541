"""Record subsequences of the superabundant stream.

Three one-pass folds over SaRecord streams:

* XaFilter: extremely abundant numbers; anchor 10080, then every later
  superabundant n whose quality sigma(n)/(n ln ln n) strictly exceeds the
  running maximum over all superabundant m in [10080, n).  Restricting the
  maximum to superabundant m is sound: for any integer m in that range the
  largest superabundant s <= m has a ratio at least as large and a log log
  at most as large, hence at least the quality of m.

* ChainFilter: the greedy threshold chains.  Starting from 10080, the next
  member is the first superabundant n whose ratio gain over the current
  tail m beats a logarithmic threshold; two variants:

      X':   gain > 1 + ln(n/m) / (ln n * ln ln m)
      X'':  gain > 1 + 2 ln(n/m) / ((ln n + ln m) * ln ln m)

All strict inequalities are decided with certified interval refinement;
an inequality that stays undecided at the precision ceiling aborts with
the offending pair rather than guessing.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from gmpy2 import mpq

from .factored import FactoredInteger, format_factorization, log_value
from .intervals import (
    DEFAULT_POLICY,
    Interval,
    PrecisionPolicy,
    UndecidedComparisonError,
    iv_add,
    iv_div,
    iv_from_mpq,
    iv_log,
    iv_mul,
    iv_sub,
)
from .sa import SaRecord

__all__ = [
    "ChainVariant",
    "XaFilter",
    "ChainFilter",
    "SequenceFolds",
    "SequenceStats",
    "filter_xa",
    "build_chain",
    "compute_stats",
]

_ANCHOR = 10080


class ChainVariant(enum.Enum):
    X_PRIME = "xprime"
    X_DOUBLE_PRIME = "xdoubleprime"


class _MemberState:
    """Cached per-member data, refinable to any precision.

    A cached enclosure computed at higher precision is accepted for any
    lower request: it is still a valid (tighter) enclosure, and reusing the
    enumerator's incrementally maintained log avoids recomputing a sum over
    the whole factorization for every stream element.
    """

    __slots__ = ("number", "ratio", "_log", "_loglog", "_ratio_iv")

    def __init__(self, number: FactoredInteger, ratio: mpq,
                 log_iv: Optional[Interval] = None):
        self.number = number
        self.ratio = ratio
        self._log = {}
        self._loglog = {}
        self._ratio_iv = {}
        if log_iv is not None:
            self._log[log_iv.precision_bits] = log_iv

    def _lookup(self, cache, bits):
        iv = cache.get(bits)
        if iv is not None:
            return iv
        better = [b for b in cache if b >= bits]
        if better:
            return cache[min(better)]
        return None

    def log(self, bits):
        iv = self._lookup(self._log, bits)
        if iv is None:
            iv = log_value(self.number, bits)
            self._log[bits] = iv
        return iv

    def loglog(self, bits):
        iv = self._lookup(self._loglog, bits)
        if iv is None:
            iv = iv_log(self.log(bits), bits)
            self._loglog[bits] = iv
        return iv

    def ratio_iv(self, bits):
        iv = self._lookup(self._ratio_iv, bits)
        if iv is None:
            iv = iv_from_mpq(self.ratio, bits)
            self._ratio_iv[bits] = iv
        return iv


def _anchor_gate(rec: SaRecord):
    """None before the anchor; True exactly at 10080."""
    if rec.number.bit_length_estimate() > 20:
        raise AssertionError("superabundant stream skipped the 10080 anchor")
    v = int(rec.number.to_int(max_bits=64))
    if v == _ANCHOR:
        return True
    if v > _ANCHOR:
        raise AssertionError("superabundant stream skipped the 10080 anchor")
    return None


class XaFilter:
    """One-pass extremely-abundant membership fold."""

    def __init__(self, policy: PrecisionPolicy = DEFAULT_POLICY):
        self.policy = policy
        self.best: Optional[_MemberState] = None
        self.members = 0

    def update(self, rec: SaRecord, state: Optional[_MemberState] = None) -> bool:
        cand = state if state is not None else _MemberState(
            rec.number, rec.ratio, rec.log_n)
        if self.best is None:
            if _anchor_gate(rec):
                self.best = cand
                self.members += 1
                return True
            return False
        if self._quality_exceeds(cand, self.best):
            self.best = cand
            self.members += 1
            return True
        return False

    def _quality_exceeds(self, n: _MemberState, m: _MemberState) -> bool:
        # q(n) > q(m)  <=>  r_n * LL_m > r_m * LL_n   (LL > 0 here)
        bits = self.policy.start_bits
        while True:
            lhs = iv_mul(n.ratio_iv(bits), m.loglog(bits), bits)
            rhs = iv_mul(m.ratio_iv(bits), n.loglog(bits), bits)
            if rhs.hi < lhs.lo:
                return True
            if lhs.hi < rhs.lo:
                return False
            if bits >= self.policy.max_bits:
                raise UndecidedComparisonError(
                    "quality comparison undecided between "
                    f"{format_factorization(n.number)} and "
                    f"{format_factorization(m.number)}", bits=bits)
            bits = self.policy.next_bits(bits)


class ChainFilter:
    """One-pass X' or X'' chain fold."""

    def __init__(self, variant: ChainVariant,
                 policy: PrecisionPolicy = DEFAULT_POLICY):
        self.variant = variant
        self.policy = policy
        self.tail: Optional[_MemberState] = None
        self.members = 0

    def update(self, rec: SaRecord, state: Optional[_MemberState] = None) -> bool:
        cand = state if state is not None else _MemberState(
            rec.number, rec.ratio, rec.log_n)
        if self.tail is None:
            if _anchor_gate(rec):
                self.tail = cand
                self.members += 1
                return True
            return False
        if self._qualifies(cand, self.tail):
            self.tail = cand
            self.members += 1
            return True
        return False

    def _qualifies(self, n: _MemberState, m: _MemberState) -> bool:
        bits = self.policy.start_bits
        while True:
            w = bits
            lhs = iv_div(n.ratio_iv(w), m.ratio_iv(w), bits)
            Ln = n.log(w)
            Lm = m.log(w)
            LLm = m.loglog(w)
            dlog = iv_sub(Ln, Lm, w)
            if self.variant is ChainVariant.X_PRIME:
                denom = iv_mul(Ln, LLm, w)
            else:
                denom = iv_mul(iv_add(Ln, Lm, w), LLm, w)
                dlog = iv_add(dlog, dlog, w)
            rhs = iv_add(iv_from_mpq(1, w), iv_div(dlog, denom, w), bits)
            if rhs.hi < lhs.lo:
                return True
            if lhs.hi < rhs.lo:
                return False
            if bits >= self.policy.max_bits:
                raise UndecidedComparisonError(
                    f"{self.variant.value} threshold undecided between "
                    f"{format_factorization(n.number)} and tail "
                    f"{format_factorization(m.number)}", bits=bits)
            bits = self.policy.next_bits(bits)


@dataclass(frozen=True)
class SequenceStats:
    count_x: int
    count_xprime: int
    count_xdoubleprime: int
    diff_xprime_minus_x: int
    diff_xdoubleprime_minus_x: int
    horizon: int
    inclusion_violations: tuple = ()

    def to_json_obj(self):
        return {
            "horizon": self.horizon,
            "count_x": self.count_x,
            "count_xprime": self.count_xprime,
            "count_xdoubleprime": self.count_xdoubleprime,
            "diff_xprime_minus_x": self.diff_xprime_minus_x,
            "diff_xdoubleprime_minus_x": self.diff_xdoubleprime_minus_x,
            "inclusion_violations": list(self.inclusion_violations),
        }


class SequenceFolds:
    """All three membership folds over a single pass of the stream."""

    def __init__(self, policy: PrecisionPolicy = DEFAULT_POLICY):
        self.policy = policy
        self.xa = XaFilter(policy)
        self.xprime = ChainFilter(ChainVariant.X_PRIME, policy)
        self.xdouble = ChainFilter(ChainVariant.X_DOUBLE_PRIME, policy)
        self.x_idx = set()
        self.xp_idx = set()
        self.xpp_idx = set()
        self.horizon = 0

    def update(self, rec: SaRecord):
        self.horizon = rec.index
        state = _MemberState(rec.number, rec.ratio, rec.log_n)
        in_x = self.xa.update(rec, state)
        in_xp = self.xprime.update(rec, state)
        in_xpp = self.xdouble.update(rec, state)
        if in_x:
            self.x_idx.add(rec.index)
        if in_xp:
            self.xp_idx.add(rec.index)
        if in_xpp:
            self.xpp_idx.add(rec.index)
        return in_x, in_xp, in_xpp

    def stats(self) -> SequenceStats:
        return compute_stats(self.x_idx, self.xp_idx, self.xpp_idx,
                             self.horizon)


def compute_stats(x_members, xprime_members, xdoubleprime_members, horizon):
    """Counts and set differences; membership identity is the index in S."""
    x = set(x_members)
    xp = set(xprime_members)
    xpp = set(xdoubleprime_members)
    violations = []
    if not x <= xp:
        violations.append(
            {"kind": "x_not_subset_xprime", "indices": sorted(x - xp)})
    if not x <= xpp:
        violations.append(
            {"kind": "x_not_subset_xdoubleprime", "indices": sorted(x - xpp)})
    return SequenceStats(
        count_x=len(x),
        count_xprime=len(xp),
        count_xdoubleprime=len(xpp),
        diff_xprime_minus_x=len(xp - x),
        diff_xdoubleprime_minus_x=len(xpp - x),
        horizon=horizon,
        inclusion_violations=tuple(
            (v["kind"], tuple(v["indices"])) for v in violations),
    )


def filter_xa(sa_stream: Iterable[SaRecord],
              policy: PrecisionPolicy = DEFAULT_POLICY
              ) -> Iterator[FactoredInteger]:
    """Stream the extremely abundant members of an ascending SA stream."""
    fold = XaFilter(policy)
    for rec in sa_stream:
        if fold.update(rec):
            yield rec.number


def build_chain(sa_stream: Iterable[SaRecord], variant: ChainVariant,
                policy: PrecisionPolicy = DEFAULT_POLICY
                ) -> Iterator[FactoredInteger]:
    """Stream the X' or X'' chain members of an ascending SA stream."""
    fold = ChainFilter(variant, policy)
    for rec in sa_stream:
        if fold.update(rec):
            yield rec.number
