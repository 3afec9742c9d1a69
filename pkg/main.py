#!/usr/bin/env python3
"""
Attraction-repulsion chemotaxis toolkit
Simulation, regime classification and exponent checks from the command line
"""
import argparse
import sys

from config.config import Config
from core.commands import cmd_check, cmd_classify, cmd_exponents, cmd_run, cmd_sweep
from core.log import setup_logging
from theory.exponents import RELATIONS


def _add_exponent_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--m1", type=float, required=True)
    parser.add_argument("--m2", type=float, required=True)
    parser.add_argument("--m3", type=float, required=True)
    parser.add_argument("--k", type=float, required=True)
    parser.add_argument("--l", type=float, required=True)
    parser.add_argument("--n", type=int, required=True, help="spatial dimension")
    parser.add_argument("--header", action="store_true", help="print the CSV header first")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chemotaxis",
        description="Attraction-repulsion chemotaxis: simulate, classify, check exponents",
        allow_abbrev=False,
    )
    parser.add_argument("--log-level", default=Config.LOG_LEVEL)
    parser.add_argument("--log-file", default=Config.LOG_FILE)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one configuration", allow_abbrev=False)
    run.add_argument("config")

    check = sub.add_parser("check", help="validate a configuration without simulating", allow_abbrev=False)
    check.add_argument("config")

    classify = sub.add_parser("classify", help="regime verdict for an exponent tuple", allow_abbrev=False)
    classify.add_argument("--tau", type=int, choices=(0, 1), required=True)
    classify.add_argument("--variant", choices=("local", "nonlocal"), default="local")
    classify.add_argument("--r", type=float, required=True)
    _add_exponent_flags(classify)

    exponents = sub.add_parser("exponents", help="interpolation exponents and p̄ search", allow_abbrev=False)
    _add_exponent_flags(exponents)
    exponents.add_argument("--p", type=float)
    exponents.add_argument("--q", type=float, help="default max{l, m3+l-1}+1")
    exponents.add_argument("--find-pbar", action="store_true")
    exponents.add_argument(
        "--require",
        help=f"comma list of relations for --find-pbar (default all: {','.join(RELATIONS)})",
    )

    sweep = sub.add_parser("sweep", help="regime map over a [sweep] grid", allow_abbrev=False)
    sweep.add_argument("config")
    sweep.add_argument("--jobs", type=int, help="worker processes (CHEMO_JOBS overrides)")

    return parser


def main(argv=None) -> int:
    """Parse arguments and dispatch to a subcommand"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level.upper(), args.log_file)

    if args.command == "run":
        return cmd_run(args.config)
    if args.command == "check":
        return cmd_check(args.config)
    if args.command == "classify":
        return cmd_classify(
            args.tau, args.variant, args.m1, args.m2, args.m3, args.k, args.l, args.r, args.n,
            header=args.header,
        )
    if args.command == "exponents":
        require = [name.strip() for name in args.require.split(",")] if args.require else None
        return cmd_exponents(
            args.n, args.m1, args.m2, args.m3, args.k, args.l,
            p=args.p, q=args.q, search=args.find_pbar, require=require, header=args.header,
        )
    if args.command == "sweep":
        return cmd_sweep(args.config, jobs=args.jobs)
    return 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
