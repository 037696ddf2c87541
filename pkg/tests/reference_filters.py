"""Independent straightforward reimplementation of the three set filters.

Deliberately naive: fixed 512-bit mpmath floats, no intervals, no precision
escalation, direct transcription of the defining inequalities.  Used to
freeze and guard the desk-scale count fixtures.  Takes (factors, ratio)
pairs so it shares nothing with the package's interval machinery.
"""
import mpmath

ANCHOR_FACTORS = ((2, 5), (3, 2), (5, 1), (7, 1))  # 10080


def reference_counts(entries, prec=512):
    """entries: iterable of (factors tuple, ratio_num, ratio_den) ascending.

    Returns (count_x, count_xprime, count_xdoubleprime, xp_minus_x,
    xpp_minus_x) computed with plain 512-bit arithmetic.
    """
    with mpmath.workprec(prec):
        log = mpmath.log

        def logn(factors):
            return mpmath.fsum(a * log(p) for p, a in factors)

        x_idx = set()
        xp_idx = set()
        xpp_idx = set()

        best_q = None           # running max quality for X
        xp_tail = None          # (ratio, logn, loglogn)
        xpp_tail = None
        anchored = False

        for idx, (factors, num, den) in enumerate(entries, start=1):
            if not anchored:
                if factors == ANCHOR_FACTORS:
                    anchored = True
                    r = mpmath.mpf(num) / den
                    L = logn(factors)
                    LL = log(L)
                    best_q = r / LL
                    xp_tail = (r, L, LL)
                    xpp_tail = (r, L, LL)
                    x_idx.add(idx)
                    xp_idx.add(idx)
                    xpp_idx.add(idx)
                continue
            r = mpmath.mpf(num) / den
            L = logn(factors)
            LL = log(L)
            q = r / LL
            if q > best_q:
                best_q = q
                x_idx.add(idx)
            rm, Lm, LLm = xp_tail
            if r / rm > 1 + (L - Lm) / (L * LLm):
                xp_tail = (r, L, log(L))
                xp_idx.add(idx)
            rm, Lm, LLm = xpp_tail
            if r / rm > 1 + 2 * (L - Lm) / ((L + Lm) * LLm):
                xpp_tail = (r, L, log(L))
                xpp_idx.add(idx)

        return (len(x_idx), len(xp_idx), len(xpp_idx),
                len(xp_idx - x_idx), len(xpp_idx - x_idx))
