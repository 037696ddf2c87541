"""Prime supply for the generators: an immutable table with cheap extension."""
from __future__ import annotations

import math

import numpy as np

__all__ = ["PrimeTable", "primes_first", "extend", "sieve_upto"]


def sieve_upto(limit):
    """All primes <= limit (numpy sieve of Eratosthenes)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _upper_bound_nth_prime(k):
    if k < 6:
        return 15
    lk = math.log(k)
    return int(k * (lk + math.log(lk)) * 1.2) + 10


class PrimeTable:
    """Immutable snapshot of the first k primes in order."""

    __slots__ = ("primes", "limit")

    def __init__(self, primes, limit):
        object.__setattr__(self, "primes", tuple(int(p) for p in primes))
        object.__setattr__(self, "limit", int(limit))

    def __setattr__(self, *a):
        raise AttributeError("PrimeTable is immutable")

    def __len__(self):
        return len(self.primes)

    def __getitem__(self, i):
        return self.primes[i]

    def __repr__(self):
        return f"PrimeTable(count={len(self.primes)}, limit={self.limit})"


def primes_first(k):
    """Exactly the first k primes."""
    if k < 1:
        raise ValueError("k must be >= 1")
    bound = _upper_bound_nth_prime(k)
    while True:
        ps = sieve_upto(bound)
        if len(ps) >= k:
            return PrimeTable(ps[:k], bound)
        bound *= 2


def extend(table, k):
    """Prefix-preserving extension to the first k primes.

    Idempotent for k <= len(table): the same snapshot is returned.
    """
    if k <= len(table):
        return table
    new = primes_first(k)
    assert new.primes[: len(table)] == table.primes
    return new
