"""Colossally abundant number construction for a fixed rational epsilon.

The objective sigma(n)/n^(1+eps) is separable over prime powers, so the
maximizer is built prime by prime: raise the exponent of p while doing so
strictly increases the per-prime objective, which happens exactly when

    (p^(a+1) - 1) / (p^a - 1)  >  p^(1+eps).

With eps = P/Q this comparison clears to exact integers by raising both
sides to the Q-th power, so no interval arithmetic is needed anywhere and
breakpoint ties are detected exactly.  At an exact tie the smaller exponent
is kept and the tie is reported in the diagnostics.  (For rational eps a
tie cannot actually occur: the right side is divisible by p while the left
is congruent to (-1)^Q mod p; the tie mechanism is kept for the contract
and as a guard.)
"""
from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq, mpz

from .factored import FactoredInteger
from .primes import PrimeTable, extend

__all__ = ["CaEpsilon", "CaDiagnostics", "ca_number"]


@dataclass(frozen=True)
class CaEpsilon:
    eps: mpq

    def __post_init__(self):
        if mpq(self.eps) <= 0:
            raise ValueError("eps must be > 0")


@dataclass
class CaDiagnostics:
    ties: list = field(default_factory=list)  # (prime, smaller_exponent)


def _step_improves(p, a, P, Q):
    """Whether raising p's exponent from a-1 to a strictly improves.

    (p^(a+1)-1)/(p^a-1) > p^((Q+P)/Q), compared as
    (p^(a+1)-1)^Q  vs  (p^a-1)^Q * p^(Q+P).
    Returns 1 (improves), 0 (exact tie), -1 (worsens).
    """
    p = mpz(p)
    lhs = (p ** (a + 1) - 1) ** Q
    rhs = (p ** a - 1) ** Q * p ** (Q + P)
    if lhs > rhs:
        return 1
    if lhs < rhs:
        return -1
    return 0


def ca_number(eps, table: PrimeTable, policy=None, diagnostics=None):
    """The smallest maximizer of sigma(n)/n^(1+eps) over n >= 1.

    eps may be a CaEpsilon, mpq, Fraction, or int.  The prime table is
    extended on demand; construction stops at the first prime whose best
    exponent is 0.  `policy` is accepted for interface symmetry with the
    other generators but unused: every decision here is exact integer
    arithmetic.  Returns the factored maximizer (1 when the penalty
    dominates everything).
    """
    if isinstance(eps, CaEpsilon):
        eps = eps.eps
    eps = mpq(eps)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    P = int(eps.numerator)
    Q = int(eps.denominator)
    if diagnostics is None:
        diagnostics = CaDiagnostics()

    factors = []
    i = 0
    while True:
        if i >= len(table):
            table = extend(table, 2 * len(table))
        p = table.primes[i]
        a = 0
        while True:
            verdict = _step_improves(p, a + 1, P, Q)
            if verdict == 1:
                a += 1
                continue
            if verdict == 0:
                diagnostics.ties.append((p, a))
            break
        if a == 0:
            break
        factors.append((p, a))
        i += 1
    return FactoredInteger(factors)
