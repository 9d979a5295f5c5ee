"""Main entry point for the affine-amenability command line."""

import argparse
import logging
import os
import sys

from affine_amenability.cli import EXIT_INPUT, RunConfig, run
from affine_amenability.server import AmenabilityMCPServer

_GLOBAL = {"command", "action", "algebra", "degree_bound", "format", "seed", "log_level"}


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--algebra",
        default=os.environ.get("AFFINE_AMENABILITY_ALGEBRA"),
        help="Presentation file or bundled name (overrides AFFINE_AMENABILITY_ALGEBRA env var)",
    )
    common.add_argument(
        "--degree-bound",
        type=int,
        default=os.environ.get("AFFINE_AMENABILITY_DEGREE_BOUND"),
        help="Coordinate window degree; derived from the inputs when omitted "
        "(overrides AFFINE_AMENABILITY_DEGREE_BOUND env var)",
    )
    common.add_argument(
        "--format",
        default=os.environ.get("AFFINE_AMENABILITY_FORMAT"),
        choices=["table", "json"],
        help="Output format; default: table for growth and measure, json otherwise "
        "(overrides AFFINE_AMENABILITY_FORMAT env var)",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=os.environ.get("AFFINE_AMENABILITY_SEED", "0"),
        help="Seed for randomized families (overrides AFFINE_AMENABILITY_SEED env var)",
    )
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(description="Amenability toolkit for finitely presented algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, parent: argparse._SubParsersAction = sub) -> argparse.ArgumentParser:
        return parent.add_parser(name, help=help_text, parents=[common])

    p = command("nf", "Normal form of an element")
    p.add_argument("--element", required=True)

    p = command("basis", "Normal-word basis up to a degree")
    p.add_argument("--degree", type=int)

    p = command("growth", "Ball dimensions of a generating set")
    p.add_argument("--generators", help="Comma-separated elements, default: all generators")
    p.add_argument("--m-max", type=int)
    p.add_argument("--epsilon", help="Gap for the growth classification, e.g. 1/10")

    folner = sub.add_parser("folner", help="Følner certificates").add_subparsers(dest="action", required=True)
    p = command("search", "Search an exhaustion for a Følner certificate", folner)
    p.add_argument("--test-set", help='Comma-separated elements, e.g. "x,y"')
    p.add_argument("--epsilon", help="e.g. 1/10")
    p.add_argument("--exhaustion", help="Pattern file or bundled name; default: balls of the test set")
    p.add_argument("--n-max", type=int)
    p.add_argument("--strategy", choices=["exhaustion", "greedy-monomial"])
    p = command("check", "Re-verify a Følner certificate file", folner)
    p.add_argument("--certificate", required=True)

    p = command("doubling", "Doubling ratios dim(VZ+V)/dim V and dim(VZ)/dim V over a family")
    p.add_argument("--z", help="Comma-separated elements spanning Z; default: all generators")
    p.add_argument("--m-max", type=int, help="Largest ball radius of the default family")
    p.add_argument("--random-sets", type=int, help="Use this many seeded random word sets instead of balls")
    p.add_argument("--set-degree", type=int)
    p.add_argument("--set-size", type=int)

    paradox = sub.add_parser("paradox", help="Paradoxical decompositions").add_subparsers(dest="action", required=True)
    p = command("find", "Search for a truncated paradox certificate", paradox)
    p.add_argument("--translators", required=True, help='Comma-separated nonzero elements, e.g. "x,y"')
    p.add_argument("--degree", type=int)
    p = command("check", "Re-verify a paradox certificate file", paradox)
    p.add_argument("--certificate", required=True)
    p.add_argument("--mass-degree", type=int, help="Also report the mass-doubling density on words of this degree")

    measure = sub.add_parser("measure", help="Finite-horizon densities").add_subparsers(dest="action", required=True)
    for name, help_text in (
        ("densities", "F_k/B_k boundary densities"),
        ("defect", "Invariance defect of a regular set"),
    ):
        p = command(name, help_text, measure)
        p.add_argument("--element", required=True)
        p.add_argument("--exhaustion")
        p.add_argument("--k-max", type=int)
        if name == "defect":
            p.add_argument("--regular", help="Regular set file; default: the whole basis")
            p.add_argument("--mode", choices=["count", "span"])

    for name, help_text in (
        ("rank", "Rank report of a module"),
        ("relrank", "Relative rank of a submodule"),
        ("exactseq", "Per-level exact sequence identity"),
    ):
        p = command(name, help_text)
        p.add_argument("--module", required=True)
        if name != "rank":
            p.add_argument("--submodule", required=True)
        p.add_argument("--exhaustion")
        p.add_argument("--n-max", type=int)

    p = command("goldie", "First level where W_n·a and W_n·b intersect")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--exhaustion")
    p.add_argument("--n-max", type=int)

    p = command("zerodiv", "Search for zero divisors among normal words")
    p.add_argument("--degree", type=int)

    command("serve", "Run the MCP server on stdio")
    return parser


def main() -> None:
    args = build_parser().parse_args()

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    if args.command == "serve":
        try:
            server = AmenabilityMCPServer(default_algebra=args.algebra, degree_bound=args.degree_bound)
        except ValueError as e:
            print(f"Error: {e}", file=sys.stderr)
            sys.exit(EXIT_INPUT)
        server.run()
        return

    options = {k: v for k, v in vars(args).items() if k not in _GLOBAL and v is not None}
    try:
        config = RunConfig(
            command=args.command,
            algebra=args.algebra,
            action=getattr(args, "action", None),
            options=options,
            output_format=args.format,
            degree_bound=args.degree_bound,
            seed=args.seed,
        )
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_INPUT)

    code, output = run(config)
    print(output, file=sys.stdout if code == 0 else sys.stderr)
    if code:
        sys.exit(code)


if __name__ == "__main__":
    main()
