"""Command-line entry point: ``granular-rules {mine,tradeoff,bench,validate}``.

Exit status is 0 on success, 1 for data errors and 2 for bad parameters.
"""
from __future__ import annotations

import argparse
import os
import sys
from contextlib import contextmanager

from .bench import run_bench, write_bench_csv
from .datasets import load_mmer, load_movielens, random_mmer, shop_example
from .exceptions import DataError, ParameterError, StructuralError
from .measures import GranularRule
from .miner import MiningConfig, mine
from .model import make_granule, validate_mmer
from .output import emit_rules, parse_descriptor, tradeoff_curve, write_curve_csv

DEFAULT_TC_GRID = "0.00001,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"


def _grid(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _add_data_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--manifest", help="YAML manifest describing the two tables and the relation")
    g.add_argument("--movielens", metavar="DIR", help="ml-100k directory (u.user, u.item, u.data)")
    g.add_argument("--example", action="store_true",
                   help="the built-in five-customer / six-product example")
    g.add_argument("--synthetic", metavar="NUxNV",
                   help="random data, e.g. 1000x100 (see --seed, --density)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.3)


def _load(args):
    if args.manifest:
        return load_mmer(args.manifest)
    if args.movielens:
        return load_movielens(args.movielens)
    if args.example:
        return shop_example()
    try:
        nu, nv = (int(v) for v in args.synthetic.lower().split("x"))
    except ValueError:
        raise ParameterError(f"--synthetic expects NUxNV, got {args.synthetic!r}") from None
    return random_mmer(nu, nv, n_source_attrs=4, n_target_attrs=3, n_values=(2, 4),
                       density=args.density, seed=args.seed)


@contextmanager
def _open_out(path):
    if not path or path == "-":
        yield sys.stdout
    else:
        try:
            fh = open(path, "w", encoding="utf-8", newline="")
        except OSError as exc:
            raise DataError(f"cannot open output: {exc}", path) from None
        with fh:
            yield fh


def build_parser():
    parser = argparse.ArgumentParser(
        prog="granular-rules",
        description="Mine granular association rules between two related universes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine rules")
    _add_data_args(p)
    p.add_argument("--ms", required=True, help="minimum source coverage")
    p.add_argument("--mt", required=True, help="minimum target coverage")
    p.add_argument("--sc", default="1", help="minimum source confidence (default 1)")
    p.add_argument("--tc", default="1", help="minimum target confidence (default 1)")
    p.add_argument("--algorithm", choices=("sandwich", "forward", "backward"), default="sandwich")
    p.add_argument("--pruning", action="store_true",
                   help="skip pairs implied to fail (complete / right-partial checks)")
    p.add_argument("--max-lhs-length", type=int)
    p.add_argument("--max-rhs-length", type=int)
    p.add_argument("--jobs", type=int, default=None, help="worker processes for the sandwich loop")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--count-ops", action="store_true",
                   help="report basic-operation counts on stderr")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("tradeoff", help="source confidence of one rule over a tc grid")
    _add_data_args(p)
    p.add_argument("--rule-lhs", required=True, help='e.g. "gender=M,age=18..24"')
    p.add_argument("--rule-rhs", required=True, help='e.g. "action=1,adventure=1"')
    p.add_argument("--grid", default=DEFAULT_TC_GRID, help="comma-separated tc values")
    p.add_argument("--out")

    p = sub.add_parser("bench", help="basic-operation counts over a threshold sweep")
    _add_data_args(p)
    p.add_argument("--ms-grid", required=True, help="comma-separated ms values")
    p.add_argument("--mt-grid", help="comma-separated mt values (default: same as --ms-grid)")
    p.add_argument("--relaxed", default="0.95",
                   help="value used for sc/tc below 1 (default 0.95)")
    p.add_argument("--algorithms", action="store_true",
                   help="add forward/backward rows for the complete match setting")
    p.add_argument("--max-lhs-length", type=int)
    p.add_argument("--max-rhs-length", type=int)
    p.add_argument("--out")

    p = sub.add_parser("validate", help="load the data and report every problem found")
    _add_data_args(p)
    return parser


def _cmd_mine(args):
    m = _load(args)
    cfg = MiningConfig(args.ms, args.mt, args.sc, args.tc, args.algorithm, args.pruning,
                       args.max_lhs_length, args.max_rhs_length)
    rs = mine(m, cfg, n_jobs=args.jobs)
    with _open_out(args.out) as fh:
        emit_rules(rs, args.format, fh)
    c = rs.counter
    print(f"{len(rs)} rules ({cfg.subtype}, {cfg.algorithm})", file=sys.stderr)
    if args.count_ops:
        print(
            f"basic_ops={c.basic_ops} rules_checked={c.rules_checked} "
            f"rules_pruned={c.rules_pruned} rules_emitted={c.rules_emitted} "
            f"source_granules={len(rs.source_granules)} "
            f"target_granules={len(rs.target_granules)} "
            f"wall_ms={c.wall_time * 1000:.1f}",
            file=sys.stderr,
        )
    return 0


def _cmd_tradeoff(args):
    m = _load(args)
    lhs = make_granule(m.source, parse_descriptor(m.source, args.rule_lhs))
    rhs = make_granule(m.target, parse_descriptor(m.target, args.rule_rhs))
    if not lhs.extension or not rhs.extension:
        raise DataError("rule side matches no objects")
    points = tradeoff_curve(m, GranularRule(lhs, rhs), _grid(args.grid))
    with _open_out(args.out) as fh:
        write_curve_csv(points, fh)
    return 0


def _cmd_bench(args):
    m = _load(args)
    rows = run_bench(
        m, _grid(args.ms_grid), _grid(args.mt_grid) if args.mt_grid else None,
        relaxed=args.relaxed, compare_algorithms=args.algorithms,
        max_lhs_length=args.max_lhs_length, max_rhs_length=args.max_rhs_length,
    )
    with _open_out(args.out) as fh:
        write_bench_csv(rows, fh)
    return 0


def _cmd_validate(args):
    m = _load(args)
    problems = validate_mmer(m)
    for v in problems:
        print(v, file=sys.stderr)
    if problems:
        return 1
    print(
        f"ok: {m.source.n_objects} source objects x {m.source.n_attributes} attributes, "
        f"{m.target.n_objects} target objects x {m.target.n_attributes} attributes, "
        f"{m.relation.n_pairs} related pairs"
    )
    return 0


COMMANDS = {
    "mine": _cmd_mine,
    "tradeoff": _cmd_tradeoff,
    "bench": _cmd_bench,
    "validate": _cmd_validate,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ParameterError, StructuralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    try:
        code = run_cli()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
