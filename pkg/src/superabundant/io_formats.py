"""Serialization of records, members, and stats.

Machine formats carry exact values only: ratios as reduced fraction strings
and interval endpoints as dyadic mantissa*2^exponent strings.  Decimals
appear in human-facing columns, printed to the digits certified by the
enclosure (computed fresh from the factorization at a fixed export
precision so output bytes are identical across runs, resumes, and precision
settings).

CSV columns (format_version 1, fixed order):
    index_in_S, factorization, digits10, ratio, quality
"""
from __future__ import annotations

import json

import gmpy2
from gmpy2 import mpfr, mpq

from .factored import (
    FactoredInteger,
    format_factorization,
    log_value,
    loglog_value,
    quality,
)
from .intervals import Interval, iv_div, iv_from_mpq

__all__ = [
    "FORMAT_VERSION",
    "EXPORT_BITS",
    "fraction_str",
    "certified_decimal",
    "digits10",
    "record_csv_row",
    "record_json_obj",
    "member_csv_header",
    "write_members_csv_row",
]

FORMAT_VERSION = 1
EXPORT_BITS = 192


def fraction_str(q):
    q = mpq(q)
    return f"{q.numerator}/{q.denominator}"


def certified_decimal(iv: Interval, max_digits=40):
    """Decimal digits shared by both enclosure endpoints.

    The printed string is a correct prefix of the exact value's decimal
    expansion; a trailing '...' marks the certified truncation point.
    """
    lo = gmpy2.digits(iv.lo, 10, max_digits + 4)
    hi = gmpy2.digits(iv.hi, 10, max_digits + 4)
    if lo[1] != hi[1] or (iv.lo < 0) != (iv.hi < 0):
        return "0..."
    sign = "-" if iv.lo < 0 else ""
    exp = lo[1]
    common = []
    for a, b in zip(lo[0], hi[0]):
        if a != b:
            break
        common.append(a)
    common = common[:max_digits]
    if not common:
        return "0..."
    ds = "".join(common)
    if exp <= 0:
        mant = "0." + "0" * (-exp) + ds
    elif exp >= len(ds):
        mant = ds + "0" * (exp - len(ds)) + "."
    else:
        mant = ds[:exp] + "." + ds[exp:]
    return sign + mant + "..."


def digits10(f: FactoredInteger):
    """Exact count of decimal digits of the value."""
    if f.is_one():
        return 1
    iv = log_value(f, EXPORT_BITS)
    with gmpy2.context(precision=EXPORT_BITS + 16, round=gmpy2.RoundUp):
        ln10_hi = gmpy2.log(mpfr(10))
    with gmpy2.context(precision=EXPORT_BITS + 16, round=gmpy2.RoundDown):
        ln10_lo = gmpy2.log(mpfr(10))
        q_lo = iv.lo / ln10_hi
    with gmpy2.context(precision=EXPORT_BITS + 16, round=gmpy2.RoundUp):
        q_hi = iv.hi / ln10_lo
    lo = gmpy2.floor(q_lo)
    hi = gmpy2.floor(q_hi)
    if lo == hi:
        return int(lo) + 1
    # enclosure straddles a power of ten: settle exactly
    return len(str(f.to_int()))


def _export_quality(f: FactoredInteger, ratio):
    if f.is_one() or f.factors == ((2, 1),):
        return ""
    ll = loglog_value(f, EXPORT_BITS)
    q = iv_div(iv_from_mpq(ratio, EXPORT_BITS), ll, EXPORT_BITS)
    return certified_decimal(q, max_digits=30)


def member_csv_header():
    return "index_in_S,factorization,digits10,ratio,quality"


def record_csv_row(index, f: FactoredInteger, ratio):
    return ",".join([
        str(index),
        format_factorization(f),
        str(digits10(f)),
        fraction_str(ratio),
        _export_quality(f, ratio),
    ])


def write_members_csv_row(fh, index, f, ratio):
    fh.write(record_csv_row(index, f, ratio))
    fh.write("\n")


def record_json_obj(index, f: FactoredInteger, ratio):
    return {
        "index_in_S": index,
        "factorization": format_factorization(f),
        "factors": [[p, a] for p, a in f.factors],
        "digits10": digits10(f),
        "ratio": fraction_str(ratio),
        "quality": _export_quality(f, ratio),
    }


def stats_json(stats, extra=None):
    obj = {"format_version": FORMAT_VERSION}
    obj.update(stats.to_json_obj())
    if extra:
        obj.update(extra)
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
