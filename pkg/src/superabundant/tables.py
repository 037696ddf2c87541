"""Ingestion of external superabundant tables and table diffing.

Published SA lists mix conventions: small entries as plain integers, large
ones as factorizations.  The adapter accepts both, one entry per line
(blank lines and '#' comments skipped), validates primality and strict
monotonicity, and carries an index offset so tables that omit leading
entries (some lists start at n = 1, some at n = 2 or later) can be aligned.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .factored import (
    FactoredInteger,
    ParseError,
    format_factorization,
    parse_factorization,
)

__all__ = ["ExternalSaTable", "ingest_table", "diff_tables", "DivergenceReport"]

_RAW_INT_LIMIT = 10 ** 15


@dataclass(frozen=True)
class ExternalSaTable:
    entries: tuple
    source: str
    offset: int

    def __len__(self):
        return len(self.entries)


def _parse_line(text, lineno):
    text = text.strip()
    if text.isdigit():
        n = int(text)
        if n < 1:
            raise ParseError("entries must be positive", line=lineno)
        if n > _RAW_INT_LIMIT:
            raise ParseError(
                "raw integers above 1e15 must be given factored", line=lineno)
        return FactoredInteger.from_int(n)
    try:
        return parse_factorization(text, verify_primality=True)
    except (ParseError, ValueError) as e:
        raise ParseError(f"line {lineno}: {e}", line=lineno)


def ingest_table(path, offset=0, source: Optional[str] = None):
    """Parse and validate a one-entry-per-line SA table file."""
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            entry = _parse_line(line, lineno)
            if entries:
                cmp = entries[-1].compare_value(entry)
                if cmp >= 0:
                    raise ParseError(
                        f"line {lineno}: entries not strictly increasing "
                        f"({format_factorization(entries[-1])} then "
                        f"{format_factorization(entry)})", line=lineno)
            entries.append(entry)
    return ExternalSaTable(tuple(entries), source or str(path), offset)


@dataclass(frozen=True)
class DivergenceReport:
    clean: bool
    common_length: int
    first_divergence_index: Optional[int] = None
    left_entry: Optional[str] = None
    right_entry: Optional[str] = None

    def to_json_obj(self):
        obj = {"clean": self.clean, "common_length": self.common_length}
        if not self.clean:
            obj.update({
                "first_divergence_index": self.first_divergence_index,
                "left": self.left_entry,
                "right": self.right_entry,
            })
        return obj


def diff_tables(a: ExternalSaTable, b: ExternalSaTable) -> DivergenceReport:
    """First SA index (1-based, offsets honored) where two tables disagree,
    or a clean match over the shared aligned length.

    Entry j (0-based) of a table with offset K holds the SA number of index
    K + j + 1, so entries ja of a and jb of b align when
    a.offset + ja == b.offset + jb.
    """
    shift = b.offset - a.offset
    n = 0
    i = max(0, shift)
    while True:
        ja = i
        jb = i - shift
        if ja >= len(a.entries) or jb < 0 or jb >= len(b.entries):
            break
        ea, eb = a.entries[ja], b.entries[jb]
        if ea != eb:
            return DivergenceReport(
                clean=False, common_length=n,
                first_divergence_index=a.offset + ja + 1,
                left_entry=format_factorization(ea),
                right_entry=format_factorization(eb))
        n += 1
        i += 1
    return DivergenceReport(clean=True, common_length=n)
