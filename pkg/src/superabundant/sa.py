"""Superabundant number enumeration.

Two independent enumerators live here:

* SaEnumerator: the production engine.  It maintains the greedy maximum-
  efficiency move prefix (the "hull", whose points are the colossally
  abundant numbers) and finds each next superabundant number as the answer
  to a successor query: the minimum-value candidate whose abundancy ratio
  strictly exceeds the current record.  The query is a branch and bound over
  small exponent perturbations of the hull; float bounds with certified
  directed endpoints steer the search, and every emission decision
  (ratio records, value comparisons, shapes) is verified in exact integer
  or rational arithmetic.

* FrontierEnumerator: a direct best-first search over the candidate space
  ordered by value, with a canonical single-parent successor rule.  It is
  asymptotically far slower and exists as an independent cross-check; tests
  assert both enumerators agree on shared prefixes, and both agree with a
  brute-force divisor-sum scan at small scale.

Candidate space (both enumerators): exponent vectors that are non-increasing
over an initial segment of the primes.  Every superabundant number has this
shape, so enumerating ratio records over candidates in increasing value
order yields exactly the superabundant numbers.

Soundness of the float bounds: all gains and costs are logs of small exact
rationals, precomputed once as certified double bounds (53-bit directed
MPFR), and each pruning inequality uses the conservative endpoint plus an
epsilon that dominates the accumulated double rounding error (sums of at
most a few hundred terms, each below 1e-15 relative error; the pads are
1e-12 and larger).  A pruned candidate is therefore genuinely outside the
search region; candidates inside are always verified exactly.
"""
from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .factored import FactoredInteger, sigma_over_n
from .intervals import (
    DEFAULT_POLICY,
    Interval,
    PrecisionPolicy,
    UndecidedComparisonError,
    iv_add,
    iv_from_mpq,
    iv_log,
    iv_mul,
    iv_scale,
    iv_sub,
)
from .primes import PrimeTable, extend, primes_first

__all__ = [
    "SaRecord",
    "SaCandidate",
    "SaEnumerator",
    "FrontierEnumerator",
    "Frontier",
    "enumerate_sa",
    "brute_force_sa_upto",
    "verify_sa_prefix",
]

_EPS = 1e-12
_LOG_BITS = 128


# ---------------------------------------------------------------------------
# Move tables: raising prime p from exponent a-1 to a multiplies the value by
# p and the abundancy ratio by (p^(a+1) - 1) / (p (p^a - 1)).
# ---------------------------------------------------------------------------

_CTX53_DOWN = gmpy2.context(precision=53, round=gmpy2.RoundDown)
_CTX53_UP = gmpy2.context(precision=53, round=gmpy2.RoundUp)


def gain_fraction(p, a):
    P = mpz(p)
    return mpq(P ** (a + 1) - 1, P * (P ** a - 1))


class _MoveTable:
    """Cached exact gains plus certified double bounds for search heuristics."""

    def __init__(self):
        self._gain = {}
        self._gain_f = {}
        self._cost_f = {}
        self._gain_iv = {}
        self._cost_iv = {}

    def gain(self, p, a):
        v = self._gain.get((p, a))
        if v is None:
            v = gain_fraction(p, a)
            self._gain[(p, a)] = v
        return v

    def gain_f(self, p, a):
        """(lo, hi) certified double bounds of ln(gain)."""
        v = self._gain_f.get((p, a))
        if v is None:
            g = self.gain(p, a)
            with _CTX53_DOWN:
                lo = float(gmpy2.log(mpfr(g.numerator)) - gmpy2.log(mpfr(g.denominator)) - mpfr(2) ** -48)
            with _CTX53_UP:
                hi = float(gmpy2.log(mpfr(g.numerator)) - gmpy2.log(mpfr(g.denominator)) + mpfr(2) ** -48)
            v = (lo, hi)
            self._gain_f[(p, a)] = v
        return v

    def cost_f(self, p):
        """(lo, hi) certified double bounds of ln(p)."""
        v = self._cost_f.get(p)
        if v is None:
            with _CTX53_DOWN:
                lo = float(gmpy2.log(mpfr(p)))
            with _CTX53_UP:
                hi = float(gmpy2.log(mpfr(p)) + mpfr(2) ** -48)
            v = (lo, hi)
            self._cost_f[p] = v
        return v

    def gain_iv(self, p, a, bits=_LOG_BITS):
        key = (p, a, bits)
        v = self._gain_iv.get(key)
        if v is None:
            v = iv_log(iv_from_mpq(self.gain(p, a), bits + 8), bits)
            self._gain_iv[key] = v
        return v

    def cost_iv(self, p, bits=_LOG_BITS):
        key = (p, bits)
        v = self._cost_iv.get(key)
        if v is None:
            v = iv_log(iv_from_mpq(p, bits + 8), bits)
            self._cost_iv[key] = v
        return v


_MOVES = _MoveTable()


def _eff_bounds(p, a, moves=_MOVES):
    glo, ghi = moves.gain_f(p, a)
    clo, chi = moves.cost_f(p)
    return glo / chi * (1 - 1e-15), ghi / clo * (1 + 1e-15)


# ---------------------------------------------------------------------------
# Records.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SaRecord:
    """One entry of the superabundant sequence.

    quality is the certified enclosure of sigma(n)/(n ln ln n); it is None
    for n in {1, 2} where ln ln n is undefined or negative.
    """

    index: int
    number: FactoredInteger
    ratio: mpq
    log_n: Optional[Interval]
    quality: Optional[Interval]


class SaCandidate:
    """A factored integer in the superabundant search space.

    Valid shapes have prime support forming a prefix of 2, 3, 5, ... with
    non-increasing exponents; every superabundant number has this form.
    Construction validates the shape.
    """

    __slots__ = ("inner",)

    def __init__(self, inner: FactoredInteger, prime_table=None):
        k = len(inner.factors)
        if prime_table is None or len(prime_table) < k:
            prime_table = primes_first(max(k, 1))
        for i, (p, a) in enumerate(inner.factors):
            if p != prime_table.primes[i]:
                raise ValueError("support is not a prime prefix")
            if i and inner.factors[i - 1][1] < a:
                raise ValueError(f"exponents increase at {p}")
        self.inner = inner

    def __eq__(self, other):
        return isinstance(other, SaCandidate) and self.inner == other.inner

    def __hash__(self):
        return hash(self.inner)

    def __repr__(self):
        return f"SaCandidate({self.inner!r})"


# ---------------------------------------------------------------------------
# The production enumerator.
# ---------------------------------------------------------------------------

class SaEnumerator:
    """Streams superabundant numbers in increasing order.

    The output is a pure function of mathematics: precision settings affect
    only internal refinement, never the emitted sequence.
    """

    def __init__(self, policy: PrecisionPolicy = DEFAULT_POLICY,
                 prime_table: Optional[PrimeTable] = None):
        self.policy = policy
        self.moves = _MOVES
        self.table = prime_table if prime_table is not None else primes_first(1 << 12)
        self._sync_prime_arrays()

        self.E = []                    # hull exponents by prime index
        self.K = 0
        self.R_num = mpz(1)            # hull ratio, kept reduced
        self.R_den = mpz(1)
        self.hull_log = iv_from_mpq(0, _LOG_BITS)
        self.rec_rel = mpq(1)          # record ratio relative to hull
        self.rec_rel_f = (0.0, 0.0)    # certified double bounds of ln(rec_rel)
        self.emitted = 0
        self.last_emitted = FactoredInteger.one()

        self.heap = []                 # (-eff_mid, prime_idx, level)
        self.look = []                 # certified-order lookahead of next moves
        self._push(0, 1)

        # numpy views for eligibility scans (certified-direction bounds)
        cap = len(self.table)
        self.gnext_hi = np.full(cap, -np.inf)   # upper bound ln gain of next level
        self.gtop_lo = np.full(cap, np.inf)     # lower bound ln gain of top level
        self.gnext_hi[0] = self.moves.gain_f(2, 1)[1]

        self.patterns = []             # recent winning delta patterns
        self.stats = {"queries": 0, "nodes": 0, "maxnodes": 0, "exacts": 0}

    # -- prime bookkeeping --------------------------------------------------

    def _sync_prime_arrays(self):
        ps = np.array(self.table.primes, dtype=np.float64)
        logs = np.log(ps)
        # pad to certified double bounds
        self.cn_lo = logs * (1 - 4e-16)
        self.cn_hi = logs * (1 + 4e-16)

    def _grow_primes(self, need_idx):
        if need_idx < len(self.table):
            return
        old_gnext = self.gnext_hi
        old_gtop = self.gtop_lo
        self.table = extend(self.table, max(need_idx + 1, 2 * len(self.table)))
        self._sync_prime_arrays()
        cap = len(self.table)
        self.gnext_hi = np.full(cap, -np.inf)
        self.gnext_hi[: len(old_gnext)] = old_gnext
        self.gtop_lo = np.full(cap, np.inf)
        self.gtop_lo[: len(old_gtop)] = old_gtop

    def _prime(self, i):
        self._grow_primes(i)
        return self.table.primes[i]

    # -- move stream ---------------------------------------------------------

    def _push(self, i, level):
        p = self._prime(i)
        glo, ghi = self.moves.gain_f(p, level)
        clo, chi = self.moves.cost_f(p)
        heapq.heappush(self.heap, (-(glo + ghi) / (clo + chi), i, level))

    def _certified_pop(self):
        """Pop the true maximum-efficiency move, escalating on float overlap."""
        neg_key, i, level = heapq.heappop(self.heap)
        if not self.heap:
            return i, level
        lo1, hi1 = _eff_bounds(self._prime(i), level)
        # all rivals whose float key is within reach of the top
        rivals = [(j, lv) for (nk, j, lv) in self.heap if -nk >= lo1 - 1e-9]
        contested = []
        for j, lv in rivals:
            lo2, hi2 = _eff_bounds(self._prime(j), lv)
            if hi2 > lo1:
                contested.append((j, lv, lo2, hi2))
        if not contested:
            return i, level
        # certified tie-break via exact cross products of log enclosures
        winner = (i, level)
        for j, lv, lo2, hi2 in contested:
            if self._eff_greater(winner, (j, lv)) is False:
                # heap float order was wrong: swap winner back into the heap
                heapq.heappush(self.heap, (-(lo1 + hi1) / 2, winner[0], winner[1]))
                self.heap = [(nk, a, b) for (nk, a, b) in self.heap
                             if (a, b) != (j, lv)]
                heapq.heapify(self.heap)
                winner = (j, lv)
                lo1, hi1 = _eff_bounds(self._prime(j), lv)
        return winner

    def _eff_greater(self, m1, m2):
        """Certified eff(m1) > eff(m2); raises if undecidable."""
        p1, a1 = self._prime(m1[0]), m1[1]
        p2, a2 = self._prime(m2[0]), m2[1]
        bits = self.policy.start_bits
        while True:
            g1 = self.moves.gain_iv(p1, a1, bits)
            g2 = self.moves.gain_iv(p2, a2, bits)
            c1 = self.moves.cost_iv(p1, bits)
            c2 = self.moves.cost_iv(p2, bits)
            diff = iv_sub(iv_mul(g1, c2, bits), iv_mul(g2, c1, bits), bits)
            if diff.lo > 0:
                return True
            if diff.hi < 0:
                return False
            if bits >= self.policy.max_bits:
                raise UndecidedComparisonError(
                    f"efficiency tie between moves ({p1},{a1}) and ({p2},{a2})",
                    margin=diff, bits=bits)
            bits = self.policy.next_bits(bits)

    def _ensure_look(self, j):
        while len(self.look) <= j:
            i, level = self._certified_pop()
            p = self._prime(i)
            glo, ghi = self.moves.gain_f(p, level)
            clo, chi = self.moves.cost_f(p)
            self.look.append((i, level, glo, ghi, clo, chi))
            self._push(i, level + 1)
            if level == 1:
                self._push(i + 1, 1)

    def _commit(self):
        """Advance the hull by its next move."""
        self._ensure_look(0)
        i, level, glo, ghi, clo, chi = self.look.pop(0)
        p = self._prime(i)
        if i == self.K:
            self.E.append(1)
            self.K += 1
        else:
            if not (i < self.K and level == self.E[i] + 1):
                raise AssertionError("hull move out of order")
            self.E[i] += 1
            if i and self.E[i] > self.E[i - 1]:
                raise AssertionError("hull shape violated")
        self.gnext_hi[i] = self.moves.gain_f(p, self.E[i] + 1)[1]
        self.gtop_lo[i] = self.moves.gain_f(p, self.E[i])[0]
        gf = self.moves.gain(p, level)
        self.R_num *= gf.numerator
        self.R_den *= gf.denominator
        g = gmpy2.gcd(self.R_num, self.R_den)
        if g > 1:
            self.R_num //= g
            self.R_den //= g
        self.rec_rel = self.rec_rel / gf
        lo, hi = self.rec_rel_f
        self.rec_rel_f = (lo - ghi - 1e-15, hi - glo + 1e-15)
        self.hull_log = iv_add(self.hull_log,
                               self.moves.cost_iv(p), _LOG_BITS)

    # -- exact evaluation -----------------------------------------------------

    def _eval_exact(self, deltas):
        """(num, den, rel) of a delta set: value quotient and ratio multiplier."""
        rel = mpq(1)
        num = mpz(1)
        den = mpz(1)
        for i, d in deltas.items():
            p = self._prime(i)
            base = self.E[i] if i < self.K else 0
            if d > 0:
                num *= mpz(p) ** d
                for lvl in range(base + 1, base + d + 1):
                    rel *= self.moves.gain(p, lvl)
            else:
                den *= mpz(p) ** (-d)
                for lvl in range(base + d + 1, base + 1):
                    rel /= self.moves.gain(p, lvl)
        return num, den, rel

    def _shape_ok(self, deltas):
        E, K = self.E, self.K

        def exp_at(i):
            base = E[i] if i < K else 0
            return base + deltas.get(i, 0)

        maxi = max(deltas)
        newK = K
        while newK > 0 and exp_at(newK - 1) == 0:
            newK -= 1
        for i in range(K, maxi + 1):
            if exp_at(i) > 0:
                if i != newK:
                    return False
                newK = i + 1
        for i in deltas:
            e = exp_at(i)
            if e < 0:
                return False
            if i < newK:
                if e <= 0:
                    return False
                if i + 1 < newK and exp_at(i + 1) > e:
                    return False
                if i > 0 and exp_at(i - 1) < e:
                    return False
            elif e > 0:
                return False
        return True

    # -- the successor query ---------------------------------------------------

    def _next_sa(self):
        E, K = self.E, self.K
        moves = self.moves
        self.stats["queries"] += 1
        self._ensure_look(0)
        i0, l0, g0lo, g0hi, c0lo, c0hi = self.look[0]
        ebar_hi = (g0hi / c0lo) * (1 + 1e-14)
        ebar_lo = (g0lo / c0hi) * (1 - 1e-14)
        rho_lo, rho_hi = self.rec_rel_f
        rec_rel = self.rec_rel

        best = {"num": None, "den": None, "rel": None, "deltas": None}
        best_v = math.inf   # certified upper bound of ln(best value quotient)

        def adopt(deltas):
            """Exact verification; adopt as new best when strictly better."""
            nonlocal best_v
            self.stats["exacts"] += 1
            if not self._shape_ok(deltas):
                return False
            num, den, rel = self._eval_exact(deltas)
            if rel <= rec_rel:
                return False
            if best["num"] is not None and not num * best["den"] < best["num"] * den:
                return False
            best["num"], best["den"], best["rel"] = num, den, rel
            best["deltas"] = dict(deltas)
            with _CTX53_UP:
                best_v = float(gmpy2.log(mpfr(num)) - gmpy2.log(mpfr(den))) + 1e-12
            return True

        # incumbent 1: shortest hull prefix whose ratio beats the record
        acc = mpq(1)
        pref = {}
        j = 0
        while acc <= rec_rel:
            self._ensure_look(j)
            li, lv = self.look[j][0], self.look[j][1]
            acc *= moves.gain(self._prime(li), lv)
            pref[li] = pref.get(li, 0) + 1
            j += 1
        adopt(pref)

        # incumbent 2: cheapest qualifying single exponent bump
        gn = self.gnext_hi[:K]
        qual = np.flatnonzero(gn > rho_lo)
        if qual.size:
            costs = self.cn_lo[qual]
            order = np.argsort(costs)
            for t in order[:4]:
                i = int(qual[t])
                if self.cn_lo[i] >= best_v:
                    break
                adopt({i: 1})

        # incumbent 3: recently winning perturbation patterns, float-screened
        for pat in self.patterns:
            deltas = {}
            ok = True
            cost_f = 0.0
            gain_f = 0.0
            for off, d in pat:
                i = K + off
                if i < 0:
                    ok = False
                    break
                deltas[i] = deltas.get(i, 0) + d
            if not ok:
                continue
            deltas = {i: d for i, d in deltas.items() if d != 0}
            if not deltas:
                continue
            for i, d in deltas.items():
                p = self._prime(i)
                base = E[i] if i < K else 0
                if base + d < 0:
                    ok = False
                    break
                clo, chi = moves.cost_f(p)
                if d > 0:
                    cost_f += chi * d
                    for lvl in range(base + 1, base + d + 1):
                        gain_f += moves.gain_f(p, lvl)[1]
                else:
                    cost_f -= clo * (-d)
                    for lvl in range(base + d + 1, base + 1):
                        gain_f -= moves.gain_f(p, lvl)[0]
            if ok and gain_f > rho_lo - _EPS and cost_f < best_v + _EPS:
                adopt(deltas)

        QB = ebar_hi * best_v - rho_lo + _EPS

        # -- working set: ladders of per-prime exponent changes -----------------
        # deficit of a move = ebar * cost - gain (adds) or gain - ebar * cost
        # (removals); any candidate beating `best` has total deficit < QB.
        d_add1 = ebar_lo * self.cn_lo[:K] - gn - _EPS
        add_idx = np.flatnonzero(d_add1 < QB)
        d_rem1 = self.gtop_lo[:K] - ebar_hi * self.cn_hi[:K] - _EPS
        rem_idx = np.flatnonzero(d_rem1 < QB)

        ladders = []   # (sort_key, kind, i, steps); step = (cum_deficit_lo, cum_cost, cum_gain_hi)
        for ii in add_idx:
            i = int(ii)
            p = self.table.primes[i]
            clo, chi = moves.cost_f(p)
            steps = []
            cumd = 0.0
            cumg = 0.0
            lvl = E[i]
            s = 0
            e1 = None
            while s < 64:
                lvl += 1
                s += 1
                glo, ghi = moves.gain_f(p, lvl)
                if e1 is None:
                    e1 = ghi / clo
                cumd += ebar_lo * clo - ghi
                if cumd >= QB:
                    break
                cumg += ghi
                steps.append((cumd, chi * s, cumg))
            if steps:
                ladders.append((-e1, 1, i, steps))
        for ii in rem_idx:
            i = int(ii)
            p = self.table.primes[i]
            clo, chi = moves.cost_f(p)
            steps = []
            cumd = 0.0
            cumg = 0.0
            lvl = E[i]
            s = 0
            while lvl >= 2:
                glo, ghi = moves.gain_f(p, lvl)
                cumd += glo - ebar_hi * chi
                if cumd >= QB:
                    break
                s += 1
                cumg -= glo
                steps.append((cumd, -clo * s, cumg))
                lvl -= 1
            if steps:
                ladders.append((2.0, -1, i, steps))
        # append run of new primes (consecutive from the support end)
        steps = []
        cumd = 0.0
        cumc = 0.0
        cumg = 0.0
        q = K
        e1 = None
        deepen = []
        while True:
            p = self._prime(q)
            clo, chi = moves.cost_f(p)
            glo, ghi = moves.gain_f(p, 1)
            if e1 is None:
                e1 = ghi / clo
            cumd += ebar_lo * clo - ghi
            if cumd >= QB:
                break
            # almost never: deeper levels on an appended prime
            g2lo, g2hi = moves.gain_f(p, 2)
            if ebar_lo * clo - g2hi < QB:
                dsteps = []
                dd = 0.0
                dg = 0.0
                lvl = 1
                while True:
                    lvl += 1
                    xlo, xhi = moves.gain_f(p, lvl)
                    dd += ebar_lo * clo - xhi
                    if dd >= QB:
                        break
                    dg += xhi
                    dsteps.append((dd, chi * (lvl - 1), dg))
                if dsteps:
                    deepen.append((q, dsteps))
            cumg += ghi
            cumc += chi * 1
            steps.append((cumd, cumc, cumg))
            q += 1
        if steps:
            ladders.append((-e1, 2, K, steps))
        for q, dsteps in deepen:
            # usable only when the append run reaches prime q
            ladders.append((2.5, 3, q, dsteps))
        # trailing removal run (whole primes off the support end)
        steps = []
        cumd = 0.0
        cumc = 0.0
        cumg = 0.0
        q = K - 1
        while q >= 0:
            p = self.table.primes[q]
            clo, chi = moves.cost_f(p)
            for lvl in range(1, E[q] + 1):
                glo, ghi = moves.gain_f(p, lvl)
                cumd += glo - ebar_hi * chi
                cumg -= glo
            if cumd >= QB:
                break
            cumc -= clo * E[q]
            steps.append((cumd, cumc, cumg))
            q -= 1
        if steps:
            ladders.append((3.0, -2, K, steps))

        ladders.sort(key=lambda L: L[0])
        nl = len(ladders)
        erem = [0.0] * (nl + 1)
        for li in range(nl - 1, -1, -1):
            key, kind, i, steps = ladders[li]
            e1 = -key if kind in (1, 2) else 0.0
            erem[li] = max(erem[li + 1], e1)

        # fractional knapsack over all add steps, for the completion bound
        fk = []
        for key, kind, i, steps in ladders:
            if kind in (1, 2, 3):
                pc = 0.0
                pg = 0.0
                for (d, c, g) in steps:
                    fk.append(((g - pg) / (c - pc), c - pc, g - pg))
                    pc, pg = c, g
        fk.sort(key=lambda t: -t[0])
        fk_c = [0.0]
        fk_g = [0.0]
        for e, dc, dg in fk:
            fk_c.append(fk_c[-1] + dc)
            fk_g.append(fk_g[-1] + dg)
        fk_e = [t[0] for t in fk] + [0.0]

        def frac_bound(x):
            if x <= 0:
                return 0.0
            k = bisect.bisect_right(fk_c, x) - 1
            if k >= len(fk):
                return fk_g[-1]
            return fk_g[k] + (x - fk_c[k]) * fk_e[k]

        nodes = 0
        deltas = {}

        def dfs(li0, cumd, cumc, cumg, trail):
            nonlocal nodes, QB
            nodes += 1
            for li in range(li0, nl):
                key, kind, i, steps = ladders[li]
                if steps[0][0] + cumd >= QB:
                    continue
                if kind in (1, -1):
                    if i in deltas:
                        continue
                    if trail < 0 and i >= K + trail:
                        continue
                elif kind == 2 or kind == -2:
                    if trail != 0:
                        continue
                else:  # deepen an appended prime: needs the append run there
                    if trail < i - K + 1:
                        continue
                er = erem[li]
                for s, (d, c, g) in enumerate(steps, start=1):
                    nd = cumd + d
                    if nd >= QB:
                        break
                    ncost = cumc + c
                    ng = cumg + g
                    if ng <= rho_hi:
                        tmax = best_v - ncost
                        fb = ebar_hi * tmax if tmax <= 0 else min(
                            frac_bound(tmax), er * tmax)
                        if ng + fb <= rho_lo + _EPS:
                            continue
                    # apply
                    if kind == 1 or kind == -1:
                        deltas[i] = s if kind == 1 else -s
                        newtrail = trail
                        keys = (i,)
                    elif kind == 2:
                        for t in range(s):
                            deltas[K + t] = deltas.get(K + t, 0) + 1
                        newtrail = s
                        keys = tuple(range(K, K + s))
                    elif kind == 3:
                        deltas[i] = deltas.get(i, 0) + s
                        newtrail = trail
                        keys = (i,)
                    else:
                        for t in range(K - s, K):
                            deltas[t] = -E[t]
                        newtrail = -s
                        keys = tuple(range(K - s, K))
                    if ng > rho_lo - _EPS and ncost < best_v + _EPS:
                        if adopt(deltas):
                            QB = ebar_hi * best_v - rho_lo + _EPS
                    dfs(li + 1, nd, ncost, ng, newtrail)
                    if kind == 2:
                        for t in keys:
                            deltas[t] -= 1
                            if deltas[t] == 0:
                                del deltas[t]
                    elif kind == 3:
                        deltas[i] -= s
                        if deltas[i] == 0:
                            del deltas[i]
                    else:
                        for t in keys:
                            del deltas[t]

        dfs(0, 0.0, 0.0, 0.0, 0)
        self.stats["nodes"] += nodes
        self.stats["maxnodes"] = max(self.stats["maxnodes"], nodes)

        # -- emit ----------------------------------------------------------------
        deltas = best["deltas"]
        pat = tuple(sorted((i - K, d) for i, d in deltas.items()))
        if pat in self.patterns:
            self.patterns.remove(pat)
        self.patterns.insert(0, pat)
        del self.patterns[12:]

        self.rec_rel = best["rel"]
        with _CTX53_DOWN:
            rlo = float(gmpy2.log(mpfr(best["rel"].numerator))
                        - gmpy2.log(mpfr(best["rel"].denominator))) - 1e-12
        with _CTX53_UP:
            rhi = float(gmpy2.log(mpfr(best["rel"].numerator))
                        - gmpy2.log(mpfr(best["rel"].denominator))) + 1e-12
        self.rec_rel_f = (rlo, rhi)

        exps = list(E)
        for i, d in sorted(deltas.items()):
            while len(exps) <= i:
                exps.append(0)
            exps[i] += d
        while exps and exps[-1] == 0:
            exps.pop()
        number = FactoredInteger(
            [(self.table.primes[i], a) for i, a in enumerate(exps) if a > 0])
        ratio = mpq(self.R_num * best["rel"].numerator,
                    self.R_den * best["rel"].denominator)
        log_n = self.hull_log
        for i, d in deltas.items():
            p = self.table.primes[i]
            civ = self.moves.cost_iv(p)
            if d > 0:
                log_n = iv_add(log_n, iv_scale(civ, d, _LOG_BITS), _LOG_BITS)
            else:
                log_n = iv_sub(log_n, iv_scale(civ, -d, _LOG_BITS), _LOG_BITS)

        # advance the hull past every hull point at or below the new record
        num, den = best["num"], best["den"]
        while True:
            self._ensure_look(0)
            i, lv = self.look[0][0], self.look[0][1]
            p = mpz(self._prime(i))
            if p * den <= num:
                self._commit()
                q2 = mpq(num, den * p)
                num, den = q2.numerator, q2.denominator
            else:
                break
        return number, ratio, log_n

    # -- public streaming -------------------------------------------------------

    def __iter__(self) -> Iterator[SaRecord]:
        return self

    def __next__(self) -> SaRecord:
        if self.emitted == 0:
            self.emitted = 1
            self.last_emitted = FactoredInteger.one()
            return SaRecord(1, FactoredInteger.one(), mpq(1), None, None)
        number, ratio, log_n = self._next_sa()
        self.emitted += 1
        self.last_emitted = number
        qual = None
        if number.factors and number.factors != ((2, 1),):
            ll = iv_log(log_n, _LOG_BITS)
            from .factored import quality_from_parts
            qual = quality_from_parts(ratio, ll, _LOG_BITS)
        return SaRecord(self.emitted, number, ratio, log_n, qual)

    # -- checkpointable state ----------------------------------------------------

    def state(self):
        """Serializable snapshot sufficient for a bit-exact resume."""
        from .factored import format_factorization
        return {
            "hull_exponents": list(self.E),
            "emitted": self.emitted,
            "record_ratio": [str(self.rec_rel.numerator * self.R_num),
                             str(self.rec_rel.denominator * self.R_den)],
            "last_emitted": format_factorization(self.last_emitted),
        }

    @classmethod
    def from_state(cls, state, policy: PrecisionPolicy = DEFAULT_POLICY):
        from .factored import parse_factorization
        en = cls(policy)
        exps = state["hull_exponents"]
        en._grow_primes(len(exps) + 2)
        # replay hull commits in move order until the stored exponents match
        target = list(exps)
        while en.E != target:
            en._ensure_look(0)
            i, lv = en.look[0][0], en.look[0][1]
            if i >= len(target) or (lv > target[i] if i < len(target) else True):
                raise ValueError("checkpoint hull state is not a greedy prefix")
            en._commit()
        en.emitted = state["emitted"]
        en.last_emitted = parse_factorization(state["last_emitted"],
                                              verify_primality=False)
        rec = mpq(mpz(state["record_ratio"][0]), mpz(state["record_ratio"][1]))
        en.rec_rel = rec / mpq(en.R_num, en.R_den)
        with _CTX53_DOWN:
            rlo = float(gmpy2.log(mpfr(en.rec_rel.numerator))
                        - gmpy2.log(mpfr(en.rec_rel.denominator))) - 1e-12
        with _CTX53_UP:
            rhi = float(gmpy2.log(mpfr(en.rec_rel.numerator))
                        - gmpy2.log(mpfr(en.rec_rel.denominator))) + 1e-12
        en.rec_rel_f = (rlo, rhi)
        return en


def enumerate_sa(count, policy: PrecisionPolicy = DEFAULT_POLICY,
                 algorithm="successor"):
    """The first `count` superabundant numbers in increasing order.

    algorithm "successor" is the production engine; "frontier" is the
    best-first cross-validation engine (small counts only).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if algorithm == "successor":
        en = SaEnumerator(policy)
    elif algorithm == "frontier":
        en = FrontierEnumerator(policy)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    for rec in en:
        yield rec
        if rec.index >= count:
            return


# ---------------------------------------------------------------------------
# Best-first frontier enumeration (cross-validation engine).
# ---------------------------------------------------------------------------

@dataclass
class Frontier:
    """Pending best-first candidates keyed by certified value order."""

    pending: list
    emitted_max_ratio: mpq


class FrontierEnumerator:
    """Direct best-first search over candidates in increasing value order.

    Candidates are non-increasing exponent vectors over prime prefixes.
    Each candidate has exactly one parent (remove one unit from the last
    position), so successor generation is duplicate-free: a vector's
    children are "increment the last exponent" (when the shape allows) and
    "append the next prime at exponent 1".  Emission order is decided by
    certified log-value keys with exact integer tie-breaking; a candidate is
    superabundant exactly when its ratio beats every earlier candidate.

    Complexity grows with the full candidate count below the horizon, so
    this engine is only usable for prefixes of a few hundred entries.
    """

    def __init__(self, policy: PrecisionPolicy = DEFAULT_POLICY,
                 prime_table: Optional[PrimeTable] = None):
        self.policy = policy
        self.table = prime_table if prime_table is not None else primes_first(64)
        first = (1,)
        self.frontier = Frontier(
            pending=[(math.log(2), 0, first)],
            emitted_max_ratio=mpq(0))
        self.emitted = 0
        self._counter = 1

    def _logv(self, exps):
        return sum(a * math.log(self.table.primes[i])
                   for i, a in enumerate(exps))

    def _value(self, exps):
        n = mpz(1)
        for i, a in enumerate(exps):
            n *= mpz(self.table.primes[i]) ** a
        return n

    def _children(self, exps):
        out = []
        k = len(exps)
        if k == 1 or exps[-1] < exps[-2]:
            out.append(exps[:-1] + (exps[-1] + 1,))
        if k + 1 > len(self.table):
            self.table = extend(self.table, 2 * len(self.table))
        out.append(exps + (1,))
        return out

    def __iter__(self):
        return self

    def __next__(self):
        if self.emitted == 0:
            self.emitted = 1
            self.frontier.emitted_max_ratio = mpq(1)
            return SaRecord(1, FactoredInteger.one(), mpq(1), None, None)
        while True:
            # pop the candidate of smallest value; float keys are only a
            # heuristic, the actual order is settled exactly
            pending = self.frontier.pending
            best_i = min(range(len(pending)), key=lambda t: pending[t][0])
            close = [t for t in range(len(pending))
                     if pending[t][0] <= pending[best_i][0] + 1e-6]
            if len(close) > 1:
                vals = [(self._value(pending[t][2]), t) for t in close]
                vals.sort()
                best_i = vals[0][1]
            key, _, exps = pending.pop(best_i)
            for child in self._children(exps):
                self._counter += 1
                pending.append((self._logv(child), self._counter, child))
            ratio = sigma_over_n(FactoredInteger(
                [(self.table.primes[i], a) for i, a in enumerate(exps)]))
            if ratio > self.frontier.emitted_max_ratio:
                self.frontier.emitted_max_ratio = ratio
                self.emitted += 1
                number = FactoredInteger(
                    [(self.table.primes[i], a) for i, a in enumerate(exps)])
                log_n = None
                qual = None
                if number.factors != ((2, 1),):
                    from .factored import log_value, quality_from_parts
                    log_n = log_value(number, _LOG_BITS)
                    ll = iv_log(log_n, _LOG_BITS)
                    qual = quality_from_parts(ratio, ll, _LOG_BITS)
                elif number.factors == ((2, 1),):
                    from .factored import log_value
                    log_n = log_value(number, _LOG_BITS)
                return SaRecord(self.emitted, number, ratio, log_n, qual)


# ---------------------------------------------------------------------------
# Brute-force oracle.
# ---------------------------------------------------------------------------

def sigma_sieve(bound):
    """sigma(n) for all n <= bound (int64 numpy array; index 0 unused)."""
    s = np.zeros(bound + 1, dtype=np.int64)
    for d in range(1, bound + 1):
        s[d::d] += d
    return s


def brute_force_sa_upto(bound):
    """All superabundant n <= bound by direct record scan over every integer."""
    if bound < 1:
        return []
    if bound > 10 ** 7:
        raise ValueError("brute force capped at 1e7")
    s = sigma_sieve(bound)
    # float prefilter, exact confirmation
    n = np.arange(bound + 1, dtype=np.float64)
    n[0] = 1.0
    ratios = s / n
    cummax = np.maximum.accumulate(ratios)
    cand = np.flatnonzero(ratios >= cummax * (1 - 1e-9))
    out = []
    bn, bd = 0, 1
    for k in cand:
        k = int(k)
        if k == 0:
            continue
        if int(s[k]) * bd > bn * k:
            out.append(k)
            bn, bd = int(s[k]), k
    return out


def verify_sa_prefix(records, bound):
    """Cross-check SA records against the brute-force scan up to `bound`.

    Returns a report dict; `mismatches` must come back empty.
    """
    if bound > 10 ** 7:
        raise ValueError("bound capped at 1e7")
    reference = brute_force_sa_upto(bound)
    got = []
    for r in records:
        try:
            v = int(r.number.to_int(max_bits=64))
        except ValueError:
            break
        if v > bound:
            break
        got.append(v)
    mismatches = []
    for k in range(max(len(got), len(reference))):
        a = got[k] if k < len(got) else None
        b = reference[k] if k < len(reference) else None
        if a != b:
            mismatches.append({"index": k + 1, "generated": a, "reference": b})
    return {
        "bound": bound,
        "compared": len(reference),
        "generated_in_range": len(got),
        "mismatches": mismatches,
    }
