"""Command-line entry point: ``mdus mine|gen|compare|diff``.

Exit codes: 0 ok, 1 usage, 2 parse/validation, 3 divergence, 4 oracle refusal.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .compare import ALGOS, run_algo, run_compare
from .formats import (
    first_divergence,
    parse_database,
    parse_results,
    pattern_line,
    write_database,
    write_results,
)
from .generator import GenParams, gen_synthetic, parse_dims_spec
from .model import MdusError, ParameterError, check_delta
from .oracle import OracleBounds, OracleRefusal

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_DIVERGENT, EXIT_REFUSED = 0, 1, 2, 3, 4

log = logging.getLogger("mdus")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _delta(text):
    try:
        check_delta(text)
    except ParameterError as e:
        raise argparse.ArgumentTypeError(str(e))
    return text


def _deltas(text):
    return [_delta(t.strip()) for t in text.split(",") if t.strip()]


def _algos(text):
    out = [a.strip() for a in text.split(",") if a.strip()]
    bad = [a for a in out if a not in ALGOS]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"algorithms must be among {','.join(ALGOS)}")
    return out


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _bounds(text):
    try:
        n, k = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected NxK, e.g. 4x3") from None
    if n < 1 or k < 1:
        raise argparse.ArgumentTypeError("bounds must be positive")
    return OracleBounds(n, k)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mdus", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    m = sub.add_parser("mine", help="mine one database at one threshold")
    m.add_argument("--algo", choices=ALGOS, required=True)
    m.add_argument("--db", required=True)
    m.add_argument("--utab", required=True)
    m.add_argument("--delta", type=_delta, required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--stats", required=True)
    m.add_argument("--threads", type=_positive, default=1)
    m.add_argument("--oracle-bounds", type=_bounds, default=OracleBounds(),
                   help="max pattern itemsets x items per itemset for the oracle (default 4x3)")

    g = sub.add_parser("gen", help="generate a synthetic database")
    g.add_argument("--out-prefix", required=True)
    g.add_argument("--transactions", type=_positive, required=True)
    g.add_argument("--items", type=_positive, required=True)
    g.add_argument("--dims", default="3x3", help="MxK or K1,K2,... values per dimension")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--itemsets", type=_positive, default=4, help="mean itemsets per sequence")
    g.add_argument("--itemset-size", type=_positive, default=3, help="mean items per itemset")

    c = sub.add_parser("compare", help="run several algorithms over a threshold sweep")
    c.add_argument("--db", required=True)
    c.add_argument("--utab", required=True)
    c.add_argument("--deltas", type=_deltas, required=True)
    c.add_argument("--algos", type=_algos, default=["em", "sd"])
    c.add_argument("--out-dir")
    c.add_argument("--threads", type=_positive, default=1)
    c.add_argument("--oracle-bounds", type=_bounds, default=OracleBounds())

    d = sub.add_parser("diff", help="compare two result files")
    d.add_argument("a")
    d.add_argument("b")
    return p


def _cmd_mine(args) -> int:
    db = parse_database(args.db, args.utab)
    rep = run_algo(args.algo, db, args.delta, args.threads, args.oracle_bounds)
    write_results(rep, args.out, args.stats, db.schema.names)
    log.info("%s: %d patterns", args.algo, len(rep))
    return EXIT_OK


def _cmd_gen(args) -> int:
    params = GenParams(args.transactions, args.items, parse_dims_spec(args.dims),
                       args.itemsets, args.itemset_size, args.seed)
    db = gen_synthetic(params)
    write_database(db, f"{args.out_prefix}.db", f"{args.out_prefix}.utab")
    print(f"{args.out_prefix}.db {args.out_prefix}.utab")
    return EXIT_OK


def _cmd_compare(args) -> int:
    db = parse_database(args.db, args.utab)
    if args.out_dir:
        from .formats import ensure_dir
        ensure_dir(args.out_dir)
    res = run_compare(db, args.deltas, args.algos, args.threads, args.out_dir,
                      args.oracle_bounds)
    for line in res.verdict_lines():
        print(line)
    return EXIT_OK if res.equal else EXIT_DIVERGENT


def _cmd_diff(args) -> int:
    div = first_divergence(parse_results(args.a), parse_results(args.b))
    if div is None:
        print("verdict: equal")
        return EXIT_OK
    p, ua, ub = div
    print(f"verdict: DIVERGENT first differ on {pattern_line(p, ua if ua is not None else ub)} "
          f"(a={ua}, b={ub})")
    return EXIT_DIVERGENT


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    handler = {"mine": _cmd_mine, "gen": _cmd_gen, "compare": _cmd_compare,
               "diff": _cmd_diff}[args.cmd]
    try:
        return handler(args)
    except OracleRefusal as e:
        print(f"mdus: oracle refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except ParameterError as e:
        print(f"mdus: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (MdusError, OSError) as e:
        print(f"mdus: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
