"""Command line interface.

Exit codes: 0 ok, 1 domain error, 2 usage error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from .counting import default_table
from .errors import BudgetExceeded, DomainError
from .formats import distribution_csv, distribution_json, emit_text, iter_parse, to_dot
from .oracle import expected_total, oracle_distribution
from .unranking import default_unranker, sample_many

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("bdd_census")


def _render(b, fmt):
    return to_dot(b) if fmt == "dot" else emit_text(b)


def cmd_count(args, out):
    table = default_table()
    if args.all_sizes:
        dist = table.size_distribution(args.vars, max_vars=args.max_vars)
        out.write(distribution_csv(dist.rows))
        log.info("k=%d total=%d min=%d max=%d mode=%d", dist.k, dist.total,
                 dist.min_size, dist.max_size, dist.mode)
        if args.json:
            with open(args.json, "w") as fh:
                fh.write(distribution_json(dist.k, dist.counts))
    else:
        if args.size is None:
            raise _Usage("count needs --size or --all-sizes")
        if args.vars < 1:
            raise DomainError("--vars must be >= 1")
        out.write(f"{table.num_bdds(args.size, args.vars)}\n")


def cmd_unrank(args, out):
    b = default_unranker().unrank(args.size, args.vars, args.rank)
    out.write(_render(b, args.format))


def cmd_rank(args, out):
    if args.infile == "-":
        text = sys.stdin.read()
    else:
        with open(args.infile) as fh:
            text = fh.read()
    unranker = default_unranker()
    found = 0
    for b in iter_parse(text):
        out.write(f"{unranker.rank(b)}\n")
        found += 1
    if not found:
        raise DomainError(f"no BDD found in {args.infile}")


def cmd_sample(args, out):
    if args.count < 0:
        raise DomainError("--count must be >= 0")
    samples = sample_many(args.size, args.vars, args.count, seed=args.seed)
    ext = "dot" if args.format == "dot" else "bdd"
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for i, b in enumerate(samples):
            path = os.path.join(args.out_dir, f"sample_{i:04d}.{ext}")
            with open(path, "w") as fh:
                fh.write(_render(b, args.format))
            out.write(path + "\n")
    else:
        out.write("\n".join(_render(b, args.format) for b in samples))


def cmd_enumerate(args, out):
    first = True
    for b in default_unranker().enumerate_all(args.size, args.vars):
        if not first:
            out.write("\n")
        out.write(_render(b, args.format))
        first = False


def cmd_oracle(args, out):
    census = oracle_distribution(args.vars, jobs=args.jobs)
    if not args.check:
        out.write(distribution_csv(sorted(census.items())))
        return EXIT_OK
    counted = default_table().size_distribution(args.vars).counts
    functions = sum(census.values())
    ok = True
    for n in sorted(set(census) | set(counted)):
        if census.get(n, 0) != counted.get(n, 0):
            ok = False
            out.write(f"size {n}: oracle {census.get(n, 0)} != counted {counted.get(n, 0)}\n")
    if functions != expected_total(args.vars):
        ok = False
        out.write(f"oracle saw {functions} functions, expected {expected_total(args.vars)}\n")
    if not ok:
        return EXIT_DOMAIN
    out.write(f"{functions} functions, all sizes match\n")
    return EXIT_OK


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bdd-census", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def shape(p, size=True):
        p.add_argument("--vars", "-k", type=int, required=True, help="root index k")
        if size:
            p.add_argument("--size", "-n", type=int, required=True,
                           help="size n, both sinks included")

    p = sub.add_parser("count", help="number of ROBDDs of a given size")
    shape(p, size=False)
    p.add_argument("--size", "-n", type=int)
    p.add_argument("--all-sizes", action="store_true", help="emit the size,count CSV")
    p.add_argument("--json", metavar="PATH", help="with --all-sizes, also write a JSON summary")
    p.add_argument("--max-vars", type=int, default=7, help="budget for --all-sizes")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("unrank", help="ROBDD of a given rank")
    shape(p)
    p.add_argument("--rank", "-r", type=int, required=True)
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.set_defaults(func=cmd_unrank)

    p = sub.add_parser("rank", help="rank of each ROBDD in a text file")
    p.add_argument("--in", dest="infile", required=True, help="file path, or - for stdin")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("sample", help="uniform random ROBDDs")
    shape(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", "-m", type=int, default=1)
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.add_argument("--out-dir", help="write one file per sample instead of stdout")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("enumerate", help="all ROBDDs of a given size, in rank order")
    shape(p)
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("oracle", help="exhaustive census by truth-table compaction (k <= 4)")
    shape(p, size=False)
    p.add_argument("--check", action="store_true", help="compare against the counter")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, out=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        status = args.func(args, out)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"bdd-census: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"bdd-census: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DomainError as exc:
        print(f"bdd-census: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"bdd-census: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return status or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
