"""Command-line interface.

Subcommands: generate-sa, generate-ca, filter, stats, check-robin,
violators, verify, resume.  All long runs accept --checkpoint for periodic
state saves; `resume` continues one so the combined output is byte-identical
to an uninterrupted run.

Exit codes: 0 success, 1 usage error, 2 undecided-precision abort, 3 I/O
error.  Errors emit one machine-readable JSON object on stderr.

Configuration precedence: command-line flags, then SUPERAB_* environment
variables (SUPERAB_PRECISION_START, SUPERAB_PRECISION_MAX, SUPERAB_FORMAT),
then built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from gmpy2 import mpq

from . import __version__
from .ca import ca_number
from .checkpoint import (
    CheckpointError,
    dump_folds,
    load_folds,
    read_checkpoint,
    write_checkpoint,
)
from .factored import (
    FactoredInteger,
    ParseError,
    format_factorization,
    parse_factorization,
)
from .intervals import PrecisionPolicy, UndecidedComparisonError
from .io_formats import (
    certified_decimal,
    fraction_str,
    member_csv_header,
    record_csv_row,
    record_json_obj,
    stats_json,
)
from .primes import primes_first
from .robin import (
    counterexample_report,
    gronwall_bound_check,
    robin_check,
    robin_violators_upto,
)
from .sa import SaEnumerator
from .sequences import SequenceFolds
from .tables import ExternalSaTable, diff_tables, ingest_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNDECIDED = 2
EXIT_IO = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _env_int(name, default):
    v = os.environ.get(name)
    if v is None:
        return default
    try:
        return int(v)
    except ValueError:
        raise _UsageError(f"environment variable {name} is not an integer: {v!r}")


def _build_parser():
    p = _Parser(prog="superabundant",
                description="Superabundant numbers, Robin's inequality, "
                            "and record subsequences with certified arithmetic.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default, fmts=("text", "csv", "jsonl", "json")):
        sp.add_argument("--precision-start", type=int, default=None,
                        help="starting precision in bits (default 128)")
        sp.add_argument("--precision-max", type=int, default=None,
                        help="precision ceiling in bits (default 4096)")
        sp.add_argument("--out", default=None,
                        help="output path (default: stdout)")
        sp.add_argument("--format", choices=fmts, default=None,
                        help=f"output format (default {fmt_default})")
        sp.add_argument("--progress", action="store_true",
                        help="periodic progress lines on stderr")
        sp.add_argument("--workers", type=int, default=1,
                        help="worker count for sharded scans; enumeration "
                             "output never depends on it")
        sp.set_defaults(fmt_default=fmt_default)

    def enumeration(sp):
        sp.add_argument("--checkpoint", default=None,
                        help="write periodic resumable state to this file")
        sp.add_argument("--checkpoint-every", type=int, default=1000,
                        help="records between checkpoint writes")
        sp.add_argument("--stop-after", type=int, default=None,
                        help="stop cleanly after this many records "
                             "(testing aid for resume)")

    sp = sub.add_parser("generate-sa", help="first N superabundant numbers")
    sp.add_argument("--count", type=int, required=True)
    common(sp, "text", fmts=("text", "csv", "jsonl"))
    enumeration(sp)

    sp = sub.add_parser("generate-ca",
                        help="colossally abundant number for one epsilon")
    sp.add_argument("--eps", required=True, metavar="P/Q",
                    help="rational epsilon > 0, e.g. 1/10")
    common(sp, "text", fmts=("text", "json"))

    sp = sub.add_parser("filter", help="members of X, X' or X''")
    sp.add_argument("--set", required=True, dest="which",
                    choices=("xa", "xprime", "xdoubleprime"))
    sp.add_argument("--count", type=int, required=True,
                    help="superabundant horizon (number of SA entries scanned)")
    common(sp, "csv", fmts=("text", "csv", "jsonl"))
    enumeration(sp)

    sp = sub.add_parser("stats",
                        help="set counts and differences at an SA horizon")
    sp.add_argument("--count", type=int, required=True)
    common(sp, "json", fmts=("json",))
    enumeration(sp)

    sp = sub.add_parser("check-robin", help="Robin inequality verdict for n")
    sp.add_argument("n", help="integer or canonical factorization")
    common(sp, "json", fmts=("json",))

    sp = sub.add_parser("violators",
                        help="all n >= 3 violating Robin's inequality up to a bound")
    sp.add_argument("--bound", type=int, required=True)
    common(sp, "json", fmts=("json", "text"))

    sp = sub.add_parser("verify",
                        help="diff generated SA prefix against an external table")
    sp.add_argument("--against", required=True, metavar="FILE")
    sp.add_argument("--offset", type=int, default=0,
                    help="index offset of the external table (entry 1 of the "
                         "file corresponds to SA index offset+1)")
    common(sp, "json", fmts=("json",))

    sp = sub.add_parser("resume", help="continue a checkpointed run")
    sp.add_argument("--checkpoint", required=True)
    sp.add_argument("--stop-after", type=int, default=None)
    sp.add_argument("--progress", action="store_true")
    return p


def _policy_from(args):
    start = args.precision_start
    if start is None:
        start = _env_int("SUPERAB_PRECISION_START", 128)
    maxb = args.precision_max
    if maxb is None:
        maxb = _env_int("SUPERAB_PRECISION_MAX", 4096)
    try:
        return PrecisionPolicy(start_bits=start, max_bits=maxb)
    except ValueError as e:
        raise _UsageError(str(e))


def _format_from(args):
    fmt = args.format
    if fmt is None:
        fmt = os.environ.get("SUPERAB_FORMAT") or args.fmt_default
    return fmt


class _Output:
    """Line-oriented output sink supporting truncate-and-append resume."""

    def __init__(self, path, resume_lines=None):
        self.path = path
        self.lines_written = 0
        if path is None:
            self.fh = sys.stdout
            self._own = False
        elif resume_lines is not None and os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                kept = []
                for i, line in enumerate(fh):
                    if i >= resume_lines:
                        break
                    kept.append(line)
            if len(kept) != resume_lines:
                raise CheckpointError(
                    f"output file {path} has fewer lines than the checkpoint "
                    f"recorded ({len(kept)} < {resume_lines})")
            with open(path, "w", encoding="utf-8") as fh:
                fh.writelines(kept)
            self.fh = open(path, "a", encoding="utf-8")
            self._own = True
            self.lines_written = resume_lines
        else:
            self.fh = open(path, "w", encoding="utf-8")
            self._own = True

    def write_line(self, text):
        self.fh.write(text)
        self.fh.write("\n")
        self.lines_written += 1

    def close(self):
        if self._own:
            self.fh.close()
        else:
            self.fh.flush()


class _Progress:
    def __init__(self, enabled, total):
        self.enabled = enabled
        self.total = total
        self.t0 = time.time()
        self.last = self.t0

    def tick(self, done):
        if not self.enabled:
            return
        now = time.time()
        if now - self.last >= 5.0:
            rate = done / max(now - self.t0, 1e-9)
            sys.stderr.write(
                f"progress: {done}/{self.total} records "
                f"({rate:.0f}/s, {now - self.t0:.0f}s elapsed)\n")
            sys.stderr.flush()
            self.last = now


def _record_line(fmt, rec):
    if fmt == "text":
        return str(rec.number.to_int(max_bits=1 << 24))
    if fmt == "csv":
        return record_csv_row(rec.index, rec.number, rec.ratio)
    if fmt == "jsonl":
        return json.dumps(record_json_obj(rec.index, rec.number, rec.ratio),
                          sort_keys=True)
    raise _UsageError(f"format {fmt} not valid here")


def _run_enumeration(command, config, policy, progress_flag, checkpoint_path,
                     checkpoint_every, stop_after, resume_doc=None):
    """Shared loop for generate-sa, filter, and stats (and their resumes)."""
    count = config["count"]
    fmt = config["format"]
    out_path = config["out"]
    which = config.get("which")

    if resume_doc is None:
        enum = SaEnumerator(policy)
        folds = SequenceFolds(policy) if command in ("filter", "stats") else None
        out = _Output(out_path)
        if command == "filter" and fmt == "csv":
            out.write_line(member_csv_header())
        if command == "generate-sa" and fmt == "csv":
            out.write_line(member_csv_header())
    else:
        enum = SaEnumerator.from_state(resume_doc["enumerator"], policy)
        folds = (load_folds(resume_doc["folds"], policy)
                 if resume_doc["folds"] is not None else None)
        out = _Output(out_path, resume_lines=resume_doc["output"].get("lines", 0))

    prog = _Progress(progress_flag, count)
    emitted_limit = stop_after if stop_after is not None else count

    def save():
        if checkpoint_path is None:
            return
        write_checkpoint(
            checkpoint_path, command, config, enum.state(),
            folds=folds, output_state={"lines": out.lines_written})

    try:
        while enum.emitted < min(count, emitted_limit):
            rec = next(enum)
            if command == "generate-sa":
                out.write_line(_record_line(fmt, rec))
            else:
                in_x, in_xp, in_xpp = folds.update(rec)
                if command == "filter":
                    hit = {"xa": in_x, "xprime": in_xp,
                           "xdoubleprime": in_xpp}[which]
                    if hit:
                        if fmt == "text":
                            out.write_line(str(rec.number.to_int(max_bits=1 << 24)))
                        elif fmt == "csv":
                            out.write_line(record_csv_row(
                                rec.index, rec.number, rec.ratio))
                        else:
                            out.write_line(json.dumps(record_json_obj(
                                rec.index, rec.number, rec.ratio),
                                sort_keys=True))
            prog.tick(enum.emitted)
            if checkpoint_path and enum.emitted % checkpoint_every == 0:
                save()
        finished = enum.emitted >= count
        if command == "stats" and finished:
            st = folds.stats()
            extra = {
                "library_version": __version__,
                "precision_start_bits": policy.start_bits,
                "precision_max_bits": policy.max_bits,
            }
            out.write_line(stats_json(st, extra).rstrip("\n"))
            if st.inclusion_violations:
                sys.stderr.write(json.dumps({
                    "finding": "inclusion-violation",
                    "detail": [list(v) for v in st.inclusion_violations],
                }, sort_keys=True) + "\n")
        save()
    finally:
        out.close()
    return EXIT_OK


def _cmd_generate_sa(args):
    policy = _policy_from(args)
    fmt = _format_from(args)
    if args.count < 1:
        raise _UsageError("--count must be >= 1")
    config = {"count": args.count, "format": fmt, "out": args.out}
    return _run_enumeration("generate-sa", config, policy, args.progress,
                            args.checkpoint, args.checkpoint_every,
                            args.stop_after)


def _cmd_filter(args):
    policy = _policy_from(args)
    fmt = _format_from(args)
    if args.count < 1:
        raise _UsageError("--count must be >= 1")
    config = {"count": args.count, "format": fmt, "out": args.out,
              "which": args.which}
    return _run_enumeration("filter", config, policy, args.progress,
                            args.checkpoint, args.checkpoint_every,
                            args.stop_after)


def _cmd_stats(args):
    policy = _policy_from(args)
    fmt = _format_from(args)
    if args.count < 1:
        raise _UsageError("--count must be >= 1")
    config = {"count": args.count, "format": fmt, "out": args.out}
    return _run_enumeration("stats", config, policy, args.progress,
                            args.checkpoint, args.checkpoint_every,
                            args.stop_after)


def _cmd_resume(args):
    doc = read_checkpoint(args.checkpoint)
    command = doc["command"]
    config = doc["config"]
    policy = PrecisionPolicy()  # resumed decisions are precision-independent
    return _run_enumeration(command, config, policy, args.progress,
                            args.checkpoint, 1000, args.stop_after,
                            resume_doc=doc)


def _cmd_generate_ca(args):
    policy = _policy_from(args)
    fmt = _format_from(args)
    txt = args.eps.strip()
    try:
        if "/" in txt:
            num, den = txt.split("/", 1)
            eps = mpq(int(num), int(den))
        else:
            eps = mpq(int(txt))
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"bad --eps value {txt!r}")
    if eps <= 0:
        raise _UsageError("--eps must be > 0")
    from .ca import CaDiagnostics
    diag = CaDiagnostics()
    n = ca_number(eps, primes_first(64), policy, diagnostics=diag)
    out = _Output(args.out)
    try:
        if fmt == "text":
            out.write_line(format_factorization(n))
        else:
            obj = {
                "eps": fraction_str(eps),
                "factorization": format_factorization(n),
                "factors": [[p, a] for p, a in n.factors],
                "ties": [[p, a] for p, a in diag.ties],
            }
            out.write_line(json.dumps(obj, sort_keys=True))
    finally:
        out.close()
    return EXIT_OK


def _parse_n_argument(text):
    text = text.strip()
    if text.isdigit():
        return FactoredInteger.from_int(int(text))
    return parse_factorization(text, verify_primality=True)


def _cmd_check_robin(args):
    policy = _policy_from(args)
    f = _parse_n_argument(args.n)
    verdict = robin_check(f, policy)
    gron = gronwall_bound_check(f, policy)
    lo, hi = verdict.margin.as_dyadic_strings()
    obj = {
        "n": format_factorization(f),
        "status": verdict.status.value,
        "sign": {"LESS": "less", "GREATER": "greater"}[verdict.sign.name],
        "margin_decimal": certified_decimal(verdict.margin, 20),
        "margin_dyadic": {"lo": lo, "hi": hi},
        "precision_bits": verdict.precision_bits,
        "gronwall_bound_holds": gron.holds,
        "gronwall_equality_case": gron.equality_case,
    }
    if verdict.status.value == "violated":
        obj["counterexample_report"] = counterexample_report(
            f, verdict, library_version=__version__)
    out = _Output(args.out)
    try:
        out.write_line(json.dumps(obj, sort_keys=True))
    finally:
        out.close()
    return EXIT_OK


def _cmd_violators(args):
    policy = _policy_from(args)
    fmt = _format_from(args)
    if args.bound < 3:
        raise _UsageError("--bound must be >= 3")
    if args.bound > 10 ** 7:
        raise _UsageError("--bound is capped at 10000000")
    result = robin_violators_upto(args.bound, policy, workers=args.workers)
    out = _Output(args.out)
    try:
        if fmt == "text":
            for n in result:
                out.write_line(str(n))
        else:
            out.write_line(json.dumps(
                {"bound": args.bound, "violators": result}, sort_keys=True))
    finally:
        out.close()
    return EXIT_OK


def _cmd_verify(args):
    policy = _policy_from(args)
    table = ingest_table(args.against, offset=args.offset)
    need = args.offset + len(table)
    mine = []
    enum = SaEnumerator(policy)
    for rec in enum:
        mine.append(rec.number)
        if rec.index >= need:
            break
    ours = ExternalSaTable(tuple(mine), source="generated", offset=0)
    report = diff_tables(ours, table)
    obj = report.to_json_obj()
    obj["against"] = args.against
    obj["offset"] = args.offset
    out = _Output(args.out)
    try:
        out.write_line(json.dumps(obj, sort_keys=True))
    finally:
        out.close()
    return EXIT_OK


_HANDLERS = {
    "generate-sa": _cmd_generate_sa,
    "generate-ca": _cmd_generate_ca,
    "filter": _cmd_filter,
    "stats": _cmd_stats,
    "check-robin": _cmd_check_robin,
    "violators": _cmd_violators,
    "verify": _cmd_verify,
    "resume": _cmd_resume,
}


def _diag(kind, message, **detail):
    sys.stderr.write(json.dumps(
        {"error": {"type": kind, "message": message, "detail": detail}},
        sort_keys=True) + "\n")


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _UsageError as e:
        _diag("usage", str(e))
        return EXIT_USAGE
    except (ParseError, CheckpointError) as e:
        _diag("parse", str(e))
        return EXIT_USAGE
    except UndecidedComparisonError as e:
        detail = {}
        if e.bits is not None:
            detail["precision_bits"] = e.bits
        if e.margin is not None:
            lo, hi = e.margin.as_dyadic_strings()
            detail["margin_dyadic"] = {"lo": lo, "hi": hi}
        _diag("undecided-precision", str(e), **detail)
        return EXIT_UNDECIDED
    except OSError as e:
        _diag("io", str(e))
        return EXIT_IO
    except (ValueError, ArithmeticError) as e:
        _diag("invalid", str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
