"""Command line front end: build, query, crosscheck, stats.

Exit codes: 0 success, 1 usage problems, 2 verification failures (a failed
crosscheck, a corrupt database, or an internal consistency error raised by
the engine while building).
"""

import argparse
import os
import sys

from . import __version__
from .analysis import AnalysisError, hecke_field_stats, records_from_level
from .db import DbFormatError, load_db, write_db
from .field import FieldError
from .heckelinalg import LinalgError
from .p1 import P1Error
from .pipeline import PipelineError, build_database, crosscheck_doubly_new
from .quatalg import QuatError, load_order_config, load_shipped_order
from .report import (render_histogram_figure, render_timing_figure,
                     write_build_report, write_histogram_csv)

_VERIFICATION_ERRORS = (QuatError, LinalgError, P1Error, FieldError,
                        DbFormatError, AnalysisError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(1)


def _load_order(spec):
    if os.path.sep in spec or os.path.exists(spec):
        return load_order_config(spec)
    return load_shipped_order(spec)


def _cmd_build(args):
    order = _load_order(args.field)
    field = order.algebra.field
    disc = order.algebra.discriminant_ideal()
    levels = build_database(order, args.min_norm, args.max_norm,
                            args.prime_bound)
    records = []
    for data in levels:
        records.extend(records_from_level(field, disc.label(), data,
                                          __version__, args.prime_bound))
    meta = {
        "field": field.label,
        "disc": disc.label(),
        "prime-bound": str(args.prime_bound),
        "norms": "%d-%d" % (args.min_norm, args.max_norm),
        "engine": __version__,
    }
    write_db(args.out, meta, records)
    base = os.path.splitext(args.out)[0]
    write_build_report(base + ".report.tsv", levels)
    render_timing_figure(base + ".timings.png", levels)
    print("wrote %d records over %d levels to %s" %
          (len(records), len(levels), args.out))
    return 0


def _match_range(value, lo, hi):
    if lo is not None and value < lo:
        return False
    return not (hi is not None and value > hi)


def _cmd_query(args):
    _, records = load_db(args.db)
    out = []
    for rec in records:
        norm = int(rec.level_label.split(".")[0])
        if args.field is not None and rec.field_label != args.field:
            continue
        if not _match_range(norm, args.min_norm, args.max_norm):
            continue
        if not _match_range(rec.dim, args.min_dim, args.max_dim):
            continue
        if args.cm is not None and rec.cm != args.cm:
            continue
        if args.bc is not None and rec.bc != args.bc:
            continue
        out.append(rec)
    if args.count:
        print(len(out))
        return 0
    if args.csv:
        print("field,disc,level,idx,dim,cm,bc")
        for rec in out:
            print("%s,%s,%s,%d,%d,%s,%s" % (
                rec.field_label, rec.disc_label, rec.level_label, rec.index,
                rec.dim, rec.cm, rec.bc))
        return 0
    header = ("field", "disc", "level", "idx", "dim", "poly", "cm", "bc")
    rows = [header]
    for rec in out:
        rows.append((rec.field_label, rec.disc_label, rec.level_label,
                     str(rec.index), str(rec.dim),
                     ",".join(str(c) for c in rec.poly), rec.cm, rec.bc))
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    for r in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return 0


def _cmd_crosscheck(args):
    side_p, side_q, agree = crosscheck_doubly_new(args.level, args.p, args.q,
                                                  args.prime_bound)
    print("level %d constituents: %d via disc %d, %d via disc %d" %
          (args.level, len(side_p), args.p, len(side_q), args.q))
    if agree:
        print("PASS: doubly-new eigensystems agree")
        return 0
    print("FAIL: eigensystems differ")
    only_p = [f for f in side_p if f not in side_q]
    only_q = [f for f in side_q if f not in side_p]
    for f in only_p:
        print("  only via disc %d: %r" % (args.p, f))
    for f in only_q:
        print("  only via disc %d: %r" % (args.q, f))
    return 2


def _cmd_stats(args):
    _, records = load_db(args.db)
    rows, lines = hecke_field_stats(records)
    write_histogram_csv(args.histogram_out, rows)
    base = os.path.splitext(args.histogram_out)[0]
    render_histogram_figure(base + ".png", rows)
    for line in lines:
        print(line)
    print("%d quadratic Hecke field records in %d buckets" %
          (sum(r[2] for r in rows), len(rows)))
    return 0


def build_parser():
    parser = _Parser(prog="hmfdb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    b = sub.add_parser("build", help="compute a level range and write records")
    b.add_argument("--field", required=True,
                   help="order config name (q_disc11) or path")
    b.add_argument("--min-norm", type=int, required=True)
    b.add_argument("--max-norm", type=int, required=True)
    b.add_argument("--prime-bound", type=int, required=True)
    b.add_argument("--out", required=True)
    b.set_defaults(func=_cmd_build)

    q = sub.add_parser("query", help="filter records from a database file")
    q.add_argument("--db", required=True)
    q.add_argument("--field")
    q.add_argument("--min-norm", type=int)
    q.add_argument("--max-norm", type=int)
    q.add_argument("--min-dim", type=int)
    q.add_argument("--max-dim", type=int)
    q.add_argument("--cm")
    q.add_argument("--bc")
    q.add_argument("--count", action="store_true")
    q.add_argument("--csv", action="store_true")
    q.set_defaults(func=_cmd_query)

    c = sub.add_parser("crosscheck",
                       help="compare one level through two ramified primes")
    c.add_argument("--level", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--prime-bound", type=int, default=50)
    c.set_defaults(func=_cmd_crosscheck)

    s = sub.add_parser("stats", help="Hecke field histogram from a database")
    s.add_argument("--db", required=True)
    s.add_argument("--histogram-out", required=True)
    s.set_defaults(func=_cmd_stats)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _VERIFICATION_ERRORS as exc:
        sys.stderr.write("verification failure: %s\n" % exc)
        return 2
    except OSError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
