"""Command-line interface: figure2 | bounds.

Exit codes: 0 success, 2 unusable input (missing file, schema mismatch).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import PanelSpec, SchemaMismatch, render_bounds, render_figure2


def _cmd_figure2(args: argparse.Namespace) -> int:
    spec = PanelSpec(csv_path=Path(args.csv), out_path=Path(args.out), dpi=args.dpi)
    render_figure2(spec)
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    render_bounds(Path(args.csv), Path(args.out), dpi=args.dpi)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render figure panels from latticefilter CSV output.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure2", help="3-row panel grid: |f|, |f^|, GSO norms per family")
    fig.add_argument("--csv", required=True)
    fig.add_argument("--out", required=True)
    fig.add_argument("--dpi", type=int, default=150)
    fig.set_defaults(func=_cmd_figure2)

    bnd = sub.add_parser("bounds", help="measured last GSO norm against its lower bound")
    bnd.add_argument("--csv", required=True)
    bnd.add_argument("--out", required=True)
    bnd.add_argument("--dpi", type=int, default=150)
    bnd.set_defaults(func=_cmd_bounds)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, SchemaMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
