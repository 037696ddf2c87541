"""Versioned checkpoint container for long enumeration runs.

A checkpoint captures everything needed to continue a run so that the
concatenated output is byte-identical to an uninterrupted one: the command
configuration, the enumerator state (hull exponents, record ratio, last
emitted entry), each sequence fold's state, and how many records or members
were already written.  Files are written atomically (temp file + rename).
"""
from __future__ import annotations

import json
import os
import tempfile

from gmpy2 import mpq, mpz

from .factored import format_factorization, parse_factorization
from .sequences import SequenceFolds, _MemberState

FORMAT_NAME = "superabundant-checkpoint"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    pass


def _fold_member_state(ms):
    if ms is None:
        return None
    return {
        "factorization": format_factorization(ms.number),
        "ratio": [str(ms.ratio.numerator), str(ms.ratio.denominator)],
    }


def _load_member_state(obj):
    if obj is None:
        return None
    number = parse_factorization(obj["factorization"], verify_primality=False)
    ratio = mpq(mpz(obj["ratio"][0]), mpz(obj["ratio"][1]))
    return _MemberState(number, ratio)


def dump_folds(folds: SequenceFolds):
    return {
        "xa_best": _fold_member_state(folds.xa.best),
        "xa_members": folds.xa.members,
        "xprime_tail": _fold_member_state(folds.xprime.tail),
        "xprime_members": folds.xprime.members,
        "xdouble_tail": _fold_member_state(folds.xdouble.tail),
        "xdouble_members": folds.xdouble.members,
        "x_idx": sorted(folds.x_idx),
        "xp_idx": sorted(folds.xp_idx),
        "xpp_idx": sorted(folds.xpp_idx),
        "horizon": folds.horizon,
    }


def load_folds(obj, policy):
    folds = SequenceFolds(policy)
    folds.xa.best = _load_member_state(obj["xa_best"])
    folds.xa.members = obj["xa_members"]
    folds.xprime.tail = _load_member_state(obj["xprime_tail"])
    folds.xprime.members = obj["xprime_members"]
    folds.xdouble.tail = _load_member_state(obj["xdouble_tail"])
    folds.xdouble.members = obj["xdouble_members"]
    folds.x_idx = set(obj["x_idx"])
    folds.xp_idx = set(obj["xp_idx"])
    folds.xpp_idx = set(obj["xpp_idx"])
    folds.horizon = obj["horizon"]
    return folds


def write_checkpoint(path, command, config, enum_state, folds=None,
                     output_state=None):
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "command": command,
        "config": config,
        "enumerator": enum_state,
        "folds": dump_folds(folds) if folds is not None else None,
        "output": output_state or {},
    }
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ckpt-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def read_checkpoint(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise CheckpointError(f"unreadable checkpoint: {e}")
    if doc.get("format") != FORMAT_NAME:
        raise CheckpointError("not a superabundant checkpoint file")
    if doc.get("version") != FORMAT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint version {doc.get('version')!r}")
    return doc
