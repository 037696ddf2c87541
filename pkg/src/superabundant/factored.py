"""Factored integers and the exact/certified statistics computed from them.

Large numbers never exist here as raw integers: a FactoredInteger is an
ordered (prime, exponent) vector and everything downstream (sigma(n)/n,
log n, log log n, the quality statistic) is computed straight from the
factorization.  Materializing the underlying int is allowed only for small
values (oracle checks, display of modest entries).
"""
from __future__ import annotations

import json
import re

import gmpy2
from gmpy2 import mpq, mpz

from .intervals import (
    DomainError,
    Interval,
    iv_add,
    iv_div,
    iv_from_mpq,
    iv_log,
    iv_scale,
)

__all__ = [
    "FactoredInteger",
    "ParseError",
    "sigma_over_n",
    "log_value",
    "loglog_value",
    "quality",
    "is_sa_shape",
    "parse_factorization",
    "format_factorization",
]

_TERM_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


class ParseError(ValueError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class FactoredInteger:
    """Immutable ordered prime factorization; the empty product is 1."""

    __slots__ = ("factors",)

    def __init__(self, factors, verify_primality=False):
        factors = tuple((int(p), int(a)) for p, a in factors)
        last = 1
        for p, a in factors:
            if p <= last:
                raise ValueError(f"primes not strictly increasing at {p}")
            if a < 1:
                raise ValueError(f"exponent {a} < 1 for prime {p}")
            if verify_primality and not gmpy2.is_prime(p):
                raise ValueError(f"{p} is not prime")
            last = p
        object.__setattr__(self, "factors", factors)

    def __setattr__(self, *a):
        raise AttributeError("FactoredInteger is immutable")

    @classmethod
    def one(cls):
        return cls(())

    @classmethod
    def from_int(cls, n, prime_table=None):
        """Factor a plain integer by trial division (small inputs only)."""
        n = int(n)
        if n < 1:
            raise ValueError("positive integers only")
        if n == 1:
            return cls(())
        if n >= 10 ** 18:
            raise ValueError("from_int is for small integers; pass a factorization")
        factors = []
        m = n
        p = 2
        while p * p <= m:
            if m % p == 0:
                a = 0
                while m % p == 0:
                    m //= p
                    a += 1
                factors.append((p, a))
            p += 1 if p == 2 else 2
        if m > 1:
            factors.append((m, 1))
        return cls(factors)

    # -- arithmetic-free helpers ------------------------------------------

    def is_one(self):
        return not self.factors

    def exponent_of(self, p):
        for q, a in self.factors:
            if q == p:
                return a
        return 0

    def num_prime_factors(self):
        return len(self.factors)

    def bit_length_estimate(self):
        """Upper bound on log2(n), cheap."""
        import math
        return sum(a * math.log2(p) for p, a in self.factors) + 1

    def to_int(self, max_bits=1 << 22):
        """Materialize as mpz; refuses beyond max_bits to protect memory."""
        if self.bit_length_estimate() > max_bits:
            raise ValueError("refusing to materialize a huge integer")
        n = mpz(1)
        for p, a in self.factors:
            n *= mpz(p) ** a
        return n

    def multiply(self, other):
        """Product, merging factor lists (shared primes add exponents)."""
        out = dict(self.factors)
        for p, a in other.factors:
            out[p] = out.get(p, 0) + a
        return FactoredInteger(sorted(out.items()))

    def compare_value(self, other):
        """Exact -1/0/+1 value comparison via the difference quotient.

        Only the differing part of the two factorizations is materialized,
        so this stays cheap whenever the operands are multiplicatively close.
        """
        diff = dict(self.factors)
        for p, a in other.factors:
            diff[p] = diff.get(p, 0) - a
        num = mpz(1)
        den = mpz(1)
        for p, d in diff.items():
            if d > 0:
                num *= mpz(p) ** d
            elif d < 0:
                den *= mpz(p) ** (-d)
        if num > den:
            return 1
        if num < den:
            return -1
        return 0

    def __eq__(self, other):
        return isinstance(other, FactoredInteger) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"FactoredInteger({format_factorization(self)!r})"

    def __str__(self):
        return format_factorization(self)

    # -- serialization -----------------------------------------------------

    def to_json_obj(self):
        return {"factors": [[p, a] for p, a in self.factors]}

    @classmethod
    def from_json_obj(cls, obj, verify_primality=True):
        try:
            factors = obj["factors"]
        except (TypeError, KeyError):
            raise ParseError("expected an object with a 'factors' list")
        return cls(factors, verify_primality=verify_primality)


def format_factorization(f):
    """Canonical text form, e.g. 2^5*3^2*5*7; 1 for the empty product."""
    if not f.factors:
        return "1"
    parts = []
    for p, a in f.factors:
        parts.append(f"{p}^{a}" if a > 1 else str(p))
    return "*".join(parts)


def parse_factorization(text, verify_primality=True):
    """Parse the canonical text form back into a FactoredInteger."""
    text = text.strip()
    if not text:
        raise ParseError("empty factorization")
    if text == "1":
        return FactoredInteger(())
    factors = []
    for term in text.split("*"):
        m = _TERM_RE.match(term.strip())
        if not m:
            raise ParseError(f"bad factor term {term!r}")
        p = int(m.group(1))
        a = int(m.group(2)) if m.group(2) else 1
        factors.append((p, a))
    return FactoredInteger(factors, verify_primality=verify_primality)


def parse_factorization_json(text, verify_primality=True):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"bad JSON: {e}")
    return FactoredInteger.from_json_obj(obj, verify_primality=verify_primality)


def is_sa_shape(f, prime_table):
    """Whether the factorization is a superabundant candidate shape:
    support is a prefix of the primes and exponents are non-increasing."""
    factors = f.factors
    for i, (p, a) in enumerate(factors):
        if p != prime_table.primes[i]:
            return False
        if i and factors[i - 1][1] < a:
            return False
    return True


# ---------------------------------------------------------------------------
# Statistics.
# ---------------------------------------------------------------------------

def sigma_over_n(f):
    """Exact abundancy ratio sigma(n)/n as a reduced fraction.

    Multiplicative: the product over prime powers of
    (p^(a+1) - 1) / (p^a (p - 1)).
    """
    out = mpq(1)
    for p, a in f.factors:
        P = mpz(p)
        out *= mpq(P ** (a + 1) - 1, P ** a * (P - 1))
    return out


def _require_at_least(f, minimum, what):
    # factorization value >= minimum, decided without materializing:
    # the only small cases are 1 and 2.
    if not f.factors:
        val = 1
    elif f.factors == ((2, 1),):
        val = 2
    else:
        val = 3  # any other non-empty factorization is >= 3
    if val < minimum:
        raise DomainError(f"{what} requires n >= {minimum}, got n = {val}")


def log_value(f, bits):
    """Certified enclosure of ln(n) = sum a_i ln(p_i); n >= 2 required.

    The width is bounded by 2^(guard - bits) with guard on the order of
    log2(#terms) + log2(|ln n|) + a small constant.
    """
    _require_at_least(f, 2, "log_value")
    work = bits + 16
    total = iv_from_mpq(0, work)
    for p, a in f.factors:
        term = iv_scale(iv_log(iv_from_mpq(p, work), work), a, work)
        total = iv_add(total, term, work)
    return total


def loglog_value(f, bits):
    """Certified enclosure of ln(ln(n)); n >= 3 required."""
    _require_at_least(f, 3, "loglog_value")
    return iv_log(log_value(f, bits + 8), bits)


def quality(f, bits):
    """Certified enclosure of sigma(n)/(n ln ln n); n >= 3 required."""
    ratio = sigma_over_n(f)
    ll = loglog_value(f, bits + 8)
    return iv_div(iv_from_mpq(ratio, bits + 8), ll, bits)


def quality_from_parts(ratio, loglog_iv, bits):
    """quality() when sigma(n)/n and ln ln n are already at hand."""
    return iv_div(iv_from_mpq(ratio, bits + 8), loglog_iv, bits)
