"""Command-line interface.

Exit codes: 0 success, 1 parse error, 2 validation error (including
disjointness violations and invalid instances detected while solving),
3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .arrangement import build_arrangement, cell_count_bound
from .errors import InternalError, ParseError, ValidationError
from .fileformat import parse_file, parse_rational, validate_disjointness
from .model import Instance
from .solver import solve_detailed, solve_naive


def _stats_line(stats) -> str:
    return f"stat: cells={stats.cells} lpf_calls={stats.lpf_calls} lp_calls={stats.lp_calls}"


def _cmd_solve(args) -> int:
    instance = parse_file(args.file)
    result, witness, stats = solve_detailed(instance)
    print(result)
    if args.witness and witness is not None:
        print("witness = " + ",".join(str(v) for v in witness))
    if args.stats:
        print(_stats_line(stats))
    return 0


def _cmd_naive(args) -> int:
    instance = parse_file(args.file)
    print(solve_naive(instance))
    return 0


def _cmd_cells(args) -> int:
    instance = parse_file(args.file)
    arrangement, _ = build_arrangement(instance)
    k = len(arrangement.polys)
    bound = cell_count_bound(instance.dimension, k)
    print(f"k = {k}, cells = {len(arrangement.cells)}, tau = {bound}")
    if args.list:
        for index, cell in enumerate(arrangement.cells):
            print(f"cell {index}: {cell.sign_string()}")
    return 0


def _cmd_check(args) -> int:
    instance = parse_file(args.file)
    if args.disjointness:
        violations = validate_disjointness(instance)
        if violations:
            for function_index, i, j in violations:
                print(f"overlap: function {function_index} pieces {i} and {j}")
            return 2
    print("ok")
    return 0


def _cmd_eval(args) -> int:
    instance = parse_file(args.file)
    tokens = [t.strip() for t in args.point.split(",")] if args.point else []
    point = tuple(parse_rational(token) for token in tokens)
    if len(point) != instance.dimension:
        raise ValidationError(
            f"point has {len(point)} coordinates, instance dimension is {instance.dimension}"
        )
    print(f"value = {instance.evaluate(point)}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plvcsp",
        description="Exact solver for piecewise-linear VCSPs over the rationals.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("solve", help="compute the infimum and attainment")
    cmd.add_argument("file")
    cmd.add_argument("--witness", action="store_true", help="print an optimal point when attained")
    cmd.add_argument("--stats", action="store_true", help="print cell and LP call counts")
    cmd.set_defaults(handler=_cmd_solve)

    cmd = commands.add_parser("naive", help="cross-check with the brute-force reference solver")
    cmd.add_argument("file")
    cmd.set_defaults(handler=_cmd_naive)

    cmd = commands.add_parser("cells", help="count the arrangement's non-empty cells")
    cmd.add_argument("file")
    cmd.add_argument("--list", action="store_true", help="print each cell's sign vector")
    cmd.set_defaults(handler=_cmd_cells)

    cmd = commands.add_parser("check", help="validate an instance document")
    cmd.add_argument("file")
    cmd.add_argument(
        "--disjointness",
        action="store_true",
        help="also verify that the pieces of each function are mutually disjoint",
    )
    cmd.set_defaults(handler=_cmd_check)

    cmd = commands.add_parser("eval", help="evaluate the objective at a point")
    cmd.add_argument("file")
    cmd.add_argument("--point", required=True, help='comma-separated rationals, e.g. "1/2,-3"')
    cmd.set_defaults(handler=_cmd_eval)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
