"""Build figure panels from the harness's delimited output.

Nothing here imports the harness itself; the CSV schemas below are the
whole coupling surface, so the panels can be regenerated from committed
result files alone.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

FIGURE2_COLUMNS = ("family", "i", "abs_f", "abs_fhat", "gso_norm")
BOUNDS_COLUMNS = (
    "q",
    "family",
    "width",
    "eigen_min",
    "bound_case",
    "bound_value",
    "actual_last_gso_norm",
    "bound_satisfied",
)


class SchemaMismatch(ValueError):
    """Input CSV does not conform to the expected schema."""


@dataclass(frozen=True)
class PanelSpec:
    """One panel-grid rendering job.

    ``families`` fixes the left-to-right column order; None keeps the
    order in which families first appear in the CSV, which is how the
    harness writes them.
    """

    csv_path: str | Path
    out_path: str | Path
    families: tuple[str, ...] | None = None
    dpi: int = 150


def _check_header(found, expected: tuple[str, ...]) -> None:
    found = list(found or [])
    if found == list(expected):
        return
    missing = [c for c in expected if c not in found]
    unexpected = [c for c in found if c not in expected]
    parts = []
    if missing:
        parts.append("missing columns: " + ", ".join(missing))
    if unexpected:
        parts.append("unexpected columns: " + ", ".join(unexpected))
    if not parts:
        parts.append("columns out of order: " + ", ".join(found))
    raise SchemaMismatch("; ".join(parts))


def read_figure2_csv(path: str | Path) -> dict[str, dict[str, np.ndarray]]:
    """Parse a per-index magnitude CSV into arrays keyed by family.

    Keys appear in file order. Each value maps the numeric column names
    to equal-length float arrays.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader.fieldnames, FIGURE2_COLUMNS)
        panels: dict[str, dict[str, list[float]]] = {}
        for lineno, row in enumerate(reader, start=2):
            try:
                parsed = {key: float(row[key]) for key in FIGURE2_COLUMNS[1:]}
            except (TypeError, ValueError):
                raise SchemaMismatch(f"line {lineno}: non-numeric cell") from None
            panel = panels.setdefault(row["family"], {key: [] for key in FIGURE2_COLUMNS[1:]})
            for key, value in parsed.items():
                panel[key].append(value)
    if not panels:
        raise SchemaMismatch("no data rows")
    return {
        family: {key: np.asarray(values) for key, values in data.items()}
        for family, data in panels.items()
    }


def build_figure(
    panels: dict[str, dict[str, np.ndarray]],
    families: tuple[str, ...] | None = None,
    dpi: int = 150,
) -> Figure:
    """Lay out the grid: one family per column, |f| / |f^| / GSO rows.

    Row 3 is log scaled. The Gram-Schmidt norms span eight decades for
    the gaussian family and the contrast between families is invisible
    on a linear axis.
    """
    if families is None:
        families = tuple(panels)
    unknown = [f for f in families if f not in panels]
    if unknown:
        raise SchemaMismatch("families not in CSV: " + ", ".join(unknown))
    if not families:
        raise SchemaMismatch("no families selected")
    fig = Figure(figsize=(2.9 * len(families), 6.4), dpi=dpi, layout="constrained")
    axes = fig.subplots(3, len(families), sharex=True, sharey="row", squeeze=False)
    for col, family in enumerate(families):
        data = panels[family]
        axes[0, col].plot(data["i"], data["abs_f"], ".-", ms=4, lw=0.9)
        axes[1, col].plot(data["i"], data["abs_fhat"], ".-", ms=4, lw=0.9, color="tab:orange")
        # rank-deficient families report exact zeros past their effective
        # rank; a log axis cannot show those, so plot positive entries only
        keep = data["gso_norm"] > 0
        axes[2, col].plot(
            data["i"][keep], data["gso_norm"][keep], ".-", ms=4, lw=0.9, color="tab:green"
        )
        axes[2, col].set_yscale("log")
        axes[0, col].set_title(family, fontsize=9)
        axes[2, col].set_xlabel("i")
    axes[0, 0].set_ylabel(r"$|f(i)|$")
    axes[1, 0].set_ylabel(r"$|\hat f(i)|$")
    axes[2, 0].set_ylabel("Gram-Schmidt norm")
    return fig


def render_figure2(spec: PanelSpec) -> Path:
    """Render the panel grid described by ``spec``; return the written path."""
    panels = read_figure2_csv(spec.csv_path)
    fig = build_figure(panels, families=spec.families, dpi=spec.dpi)
    out = Path(spec.out_path)
    fig.savefig(out, dpi=spec.dpi)
    return out


def render_bounds(csv_path: str | Path, out_path: str | Path, dpi: int = 150) -> Path:
    """Scatter the measured last Gram-Schmidt norm against its lower bound.

    Log-log axes with the y = x diagonal drawn in; every point on or
    above that line satisfies its bound.
    """
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader.fieldnames, BOUNDS_COLUMNS)
        rows = list(reader)
    if not rows:
        raise SchemaMismatch("no data rows")
    try:
        bound = np.array([float(r["bound_value"]) for r in rows])
        actual = np.array([float(r["actual_last_gso_norm"]) for r in rows])
        case = np.array([int(r["bound_case"]) for r in rows])
    except (TypeError, ValueError):
        raise SchemaMismatch("non-numeric cell in bound columns") from None
    fig = Figure(figsize=(4.8, 4.4), dpi=dpi, layout="constrained")
    ax = fig.subplots()
    markers = "os^v"
    for idx, label in enumerate(sorted(set(case.tolist()))):
        sel = case == label
        ax.loglog(bound[sel], actual[sel], markers[idx % len(markers)], ms=4, alpha=0.7,
                  label=f"case {label}")
    lo = min(bound.min(), actual.min())
    hi = max(bound.max(), actual.max())
    ax.loglog([lo, hi], [lo, hi], "k--", lw=0.8, label="bound = actual")
    ax.set_xlabel("lower bound")
    ax.set_ylabel("measured last GSO norm")
    ax.legend(fontsize=8)
    out = Path(out_path)
    fig.savefig(out, dpi=dpi)
    return out
