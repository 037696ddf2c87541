"""Certified interval arithmetic on dyadic endpoints.

Every transcendental quantity in this package (log n, log log n, Euler's
constant, e^gamma) is represented as an Interval: a pair of MPFR values with
directed rounding that is guaranteed to bracket the exact real.  Rational
quantities stay exact (gmpy2.mpq) and only enter intervals at the last
moment.  Strict inequalities between mixed rational/transcendental
expressions are decided by compare_certified, which refines precision until
the enclosures separate or the policy's bit ceiling is reached; it never
guesses a sign.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpq, mpz

__all__ = [
    "Interval",
    "Ordering",
    "PrecisionPolicy",
    "UndecidedComparisonError",
    "DomainError",
    "compare_certified",
    "require_decided",
    "gamma_interval",
    "exp_gamma_interval",
    "constants_gamma",
    "iv_add",
    "iv_sub",
    "iv_mul",
    "iv_div",
    "iv_log",
    "iv_exp",
    "iv_from_mpq",
    "iv_from_int",
    "iv_scale",
]


class DomainError(ValueError):
    """Raised when an operation is applied outside its mathematical domain."""


class UndecidedComparisonError(ArithmeticError):
    """A certified comparison stayed undecided at the policy's max precision.

    Carries the margin enclosure so callers can report how close the two
    sides were; callers must escalate or abort, never coerce a sign.
    """

    def __init__(self, message, margin=None, bits=None):
        super().__init__(message)
        self.margin = margin
        self.bits = bits


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    UNDECIDED = 2


@dataclass(frozen=True)
class PrecisionPolicy:
    """Escalation schedule for certified comparisons."""

    start_bits: int = 128
    max_bits: int = 4096
    growth_factor: Fraction = Fraction(2)

    def __post_init__(self):
        if self.start_bits < 64:
            raise ValueError("start_bits must be >= 64")
        if self.max_bits < self.start_bits:
            raise ValueError("max_bits must be >= start_bits")
        if Fraction(self.growth_factor) <= 1:
            raise ValueError("growth_factor must be > 1")

    def next_bits(self, bits):
        grown = int(bits * Fraction(self.growth_factor))
        return min(max(grown, bits + 1), self.max_bits)


DEFAULT_POLICY = PrecisionPolicy()

_CTX_CACHE = {}


def _ctx(bits, rnd):
    key = (bits, rnd)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = gmpy2.context(precision=bits, round=rnd,
                            trap_inexact=False, trap_overflow=False,
                            trap_underflow=False)
        _CTX_CACHE[key] = ctx
    return ctx


def _down(bits):
    return _ctx(bits, gmpy2.RoundDown)


def _up(bits):
    return _ctx(bits, gmpy2.RoundUp)


class Interval:
    """Closed interval [lo, hi] of dyadic (MPFR) endpoints containing a real.

    Immutable.  lo <= hi always holds; precision_bits records the working
    precision the endpoints were computed at (widths shrink as it grows).
    """

    __slots__ = ("lo", "hi", "precision_bits")

    def __init__(self, lo, hi, precision_bits):
        if not lo <= hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "precision_bits", precision_bits)

    def __setattr__(self, *a):
        raise AttributeError("Interval is immutable")

    def width(self):
        with _up(self.precision_bits):
            return self.hi - self.lo

    def midpoint(self):
        with _ctx(self.precision_bits, gmpy2.RoundToNearest):
            return (self.lo + self.hi) / 2

    def contains(self, x):
        """Whether the enclosure admits x (exact rational or dyadic)."""
        q = mpq(x)
        return mpq(self.lo) <= q <= mpq(self.hi)

    def encloses(self, other):
        return mpq(self.lo) <= mpq(other.lo) and mpq(other.hi) <= mpq(self.hi)

    def strictly_positive(self):
        return self.lo > 0

    def strictly_negative(self):
        return self.hi < 0

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r}, bits={self.precision_bits})"

    def as_dyadic_strings(self):
        """Exact endpoint serialization as (mantissa, exponent) pairs."""
        ml, el = self.lo.as_mantissa_exp()
        mh, eh = self.hi.as_mantissa_exp()
        return (f"{ml}*2^{el}", f"{mh}*2^{eh}")


def iv_from_int(n, bits):
    with _down(bits):
        lo = mpfr(n)
    with _up(bits):
        hi = mpfr(n)
    return Interval(lo, hi, bits)


def iv_from_mpq(q, bits):
    q = mpq(q)
    with _down(bits):
        lo = mpfr(q)
    with _up(bits):
        hi = mpfr(q)
    return Interval(lo, hi, bits)


def iv_add(a, b, bits):
    with _down(bits):
        lo = a.lo + b.lo
    with _up(bits):
        hi = a.hi + b.hi
    return Interval(lo, hi, bits)


def iv_sub(a, b, bits):
    with _down(bits):
        lo = a.lo - b.hi
    with _up(bits):
        hi = a.hi - b.lo
    return Interval(lo, hi, bits)


def iv_mul(a, b, bits):
    with _down(bits):
        lo = min(a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    with _up(bits):
        hi = max(a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return Interval(lo, hi, bits)


def iv_div(a, b, bits):
    if b.lo <= 0 <= b.hi:
        raise ZeroDivisionError("interval divisor contains zero")
    with _down(bits):
        lo = min(a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi)
    with _up(bits):
        hi = max(a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi)
    return Interval(lo, hi, bits)


def iv_scale(a, k, bits):
    """Multiply by an exact integer k >= 0."""
    if k < 0:
        raise ValueError("negative scale")
    with _down(bits):
        lo = a.lo * k
    with _up(bits):
        hi = a.hi * k
    return Interval(lo, hi, bits)


def iv_log(a, bits):
    if not a.lo > 0:
        raise DomainError("log of a non-positive enclosure")
    with _down(bits):
        lo = gmpy2.log(a.lo)
    with _up(bits):
        hi = gmpy2.log(a.hi)
    return Interval(lo, hi, bits)


def iv_exp(a, bits):
    with _down(bits):
        lo = gmpy2.exp(a.lo)
    with _up(bits):
        hi = gmpy2.exp(a.hi)
    return Interval(lo, hi, bits)


def iv_log_int(n, bits):
    """Certified ln(n) for an exact integer or rational n > 0."""
    q = mpq(n)
    if q <= 0:
        raise DomainError("log of a non-positive number")
    return iv_log(iv_from_mpq(q, bits + 8), bits)


# ---------------------------------------------------------------------------
# Euler's constant.
#
# Audited 1500-digit literal (truncated, so gamma lies in
# [literal, literal + 10^-1500]).  The test suite re-derives these digits
# from two independent engines (MPFR's const_euler and mpmath) and fails if
# either disagrees.  1500 digits cover ~4900 bits, beyond any precision the
# default policy can request.
# ---------------------------------------------------------------------------

_GAMMA_DIGITS = (
    "577215664901532860606512090082402431042159335939923598805767234884867726777"
    "664670936947063291746749514631447249807082480960504014486542836224173997644"
    "923536253500333742937337737673942792595258247094916008735203948165670853233"
    "151776611528621199501507984793745085705740029921354786146694029604325421519"
    "058775535267331399254012967420513754139549111685102807984234877587205038431"
    "093997361372553060889331267600172479537836759271351577226102734929139407984"
    "301034177717780881549570661075010161916633401522789358679654972520362128792"
    "265559536696281763887927268013243101047650596370394739495763890657296792960"
    "100901512519595092224350140934987122824794974719564697631850667612906381105"
    "182419744486783638086174945516989279230187739107294578155431600500218284409"
    "605377243420328547836701517739439870030237033951832869000155819398804270741"
    "154222781971652301107356583396734871765049194181230004065469314299929777956"
    "930310050308630341856980323108369164002589297089098548682577736428825395492"
    "587362959613329857473930237343884707037028441292016641785024873337908056275"
    "499843459076164316710314671072237002181074504441866475913480366902553245862"
    "544222534518138791243457350136129778227828814894590986384600629316947188714"
    "958752549236649352047324364109726827616087759508809512620840454447799229915"
    "724829251625127842765965708321461029821461795195795909592270420898962797125"
    "536321794887376421066060706598256199010288075612519913751167821764361905705"
    "844078357350158005607745793421314498850078641517161519456570617043245075008"
)

_GAMMA_PAD_EXP = -4980  # 2^-4980 < 10^-1499, covers the truncation residue


def gamma_interval(bits):
    """Certified enclosure of Euler's constant gamma."""
    if bits < 64:
        raise ValueError("bits must be >= 64")
    if bits > 4600:
        raise ValueError("gamma literal covers at most 4600 bits")
    digits = "".join(_GAMMA_DIGITS)
    literal = "0." + digits
    work = bits + 16
    with _down(work):
        lo = mpfr(literal)
    with _up(work):
        hi = mpfr(literal) + mpfr(2) ** _GAMMA_PAD_EXP
    with _down(bits):
        lo = lo + 0
    with _up(bits):
        hi = hi + 0
    return Interval(lo, hi, bits)


def exp_gamma_interval(bits):
    """Certified enclosure of e^gamma."""
    return iv_exp(gamma_interval(bits + 8), bits)


def constants_gamma(bits):
    """Certified (gamma, e^gamma) pair at the requested precision."""
    return gamma_interval(bits), exp_gamma_interval(bits)


# ---------------------------------------------------------------------------
# Certified comparison of real expressions.
#
# A side is either an exact rational (int, Fraction, mpq, mpz) or a callable
# bits -> Interval.  EQUAL is only ever returned for two exact rationals.
# ---------------------------------------------------------------------------

_EXACT_TYPES = (int, mpz, mpq, Fraction)


def _is_exact(x):
    return isinstance(x, _EXACT_TYPES)


def _as_interval(x, bits):
    if _is_exact(x):
        return iv_from_mpq(mpq(x), bits)
    if isinstance(x, Interval):
        return x
    return x(bits)


def compare_certified(lhs, rhs, policy=DEFAULT_POLICY):
    """Certified ordering of two real expressions.

    Returns LESS/GREATER only when the enclosures separate at some precision
    not exceeding policy.max_bits, EQUAL only when both sides are exact and
    identical, and UNDECIDED when the ceiling is reached first.
    """
    if _is_exact(lhs) and _is_exact(rhs):
        a, b = mpq(lhs), mpq(rhs)
        if a < b:
            return Ordering.LESS
        if a > b:
            return Ordering.GREATER
        return Ordering.EQUAL
    bits = policy.start_bits
    while True:
        li = _as_interval(lhs, bits)
        ri = _as_interval(rhs, bits)
        if li.hi < ri.lo:
            return Ordering.LESS
        if ri.hi < li.lo:
            return Ordering.GREATER
        if bits >= policy.max_bits:
            return Ordering.UNDECIDED
        bits = policy.next_bits(bits)


def require_decided(ordering, what, margin=None, bits=None):
    """Raise UndecidedComparisonError when an ordering came back UNDECIDED."""
    if ordering is Ordering.UNDECIDED:
        raise UndecidedComparisonError(
            f"comparison undecided at maximum precision: {what}",
            margin=margin, bits=bits)
    return ordering


def certified_sign(expr, policy=DEFAULT_POLICY):
    """Sign of a real expression with the margin enclosure at deciding bits.

    Returns (ordering vs 0, margin interval, bits used).  UNDECIDED keeps the
    widest refinement for diagnostics.
    """
    bits = policy.start_bits
    while True:
        iv = _as_interval(expr, bits)
        if iv.hi < 0:
            return Ordering.LESS, iv, bits
        if iv.lo > 0:
            return Ordering.GREATER, iv, bits
        if bits >= policy.max_bits:
            return Ordering.UNDECIDED, iv, bits
        bits = policy.next_bits(bits)
