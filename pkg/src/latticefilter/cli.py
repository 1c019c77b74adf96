"""Command-line interface: figure2 | solve | bounds.

Exit codes: 0 success, 2 configuration error, 3 solver failure in
single-run mode. CSV floats carry 17 significant digits; JSON output is
one object per line.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BadParameter
from .experiments import (
    FIGURE2_Q,
    FIGURE2_WIDTH,
    SOLVE_PROBLEMS,
    bounds_rows,
    figure2_rows,
    render_csv,
    solve_run,
)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _rows_as_json_lines(header, rows) -> str:
    lines = [json.dumps(dict(zip(header, row)), sort_keys=True) for row in rows]
    return "\n".join(lines) + "\n"


def _cmd_figure2(args: argparse.Namespace) -> int:
    header, rows = figure2_rows(args.q, args.width)
    text = render_csv(header, rows) if args.format == "csv" else _rows_as_json_lines(header, rows)
    _write(text, args.out)
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    header, rows = bounds_rows()
    text = render_csv(header, rows) if args.format == "csv" else _rows_as_json_lines(header, rows)
    _write(text, args.out)
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    record = solve_run(
        args.problem,
        seed=args.seed,
        trials=args.trials,
        with_timestamp=not args.no_timestamp,
        n=args.n,
        m=args.m,
        q=args.q,
        B=args.B,
        c=args.c,
        width=args.width,
    )
    if args.format == "csv":
        header, rows = record.csv_table()
        text = render_csv(header, rows)
    else:
        text = "\n".join(record.json_lines()) + "\n"
    _write(text, args.out)
    if args.trials == 1 and not record.trials[0]["success"]:
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticefilter",
        description="Desk-scale simulator for filtering algorithms on lattice problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure2", help="per-index amplitude magnitudes and GSO norms")
    fig.add_argument("--q", type=int, default=FIGURE2_Q)
    fig.add_argument("--width", type=int, default=FIGURE2_WIDTH)
    fig.add_argument("--out", default=None)
    fig.add_argument("--format", choices=("csv", "json"), default="csv")
    fig.set_defaults(func=_cmd_figure2)

    bnd = sub.add_parser("bounds", help="Gram-Schmidt lower-bound sweep")
    bnd.add_argument("--out", default=None)
    bnd.add_argument("--format", choices=("csv", "json"), default="csv")
    bnd.set_defaults(func=_cmd_bounds)

    slv = sub.add_parser("solve", help="seeded solver trials with per-trial records")
    slv.add_argument("problem", choices=SOLVE_PROBLEMS)
    slv.add_argument("--n", type=int, default=None)
    slv.add_argument("--m", type=int, default=None)
    slv.add_argument("--q", type=int, default=None)
    slv.add_argument("--B", type=int, default=None)
    slv.add_argument("--c", type=int, default=None)
    slv.add_argument("--width", type=int, default=None)
    slv.add_argument("--seed", type=int, default=0)
    slv.add_argument("--trials", type=int, default=1)
    slv.add_argument("--out", default=None)
    slv.add_argument("--format", choices=("json", "csv"), default="json")
    slv.add_argument(
        "--no-timestamp",
        action="store_true",
        help="omit the timestamp and wall times for byte-stable reruns",
    )
    slv.set_defaults(func=_cmd_solve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BadParameter as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
