"""Figure rendering for latticefilter CSV output."""

from .render import (
    BOUNDS_COLUMNS,
    FIGURE2_COLUMNS,
    PanelSpec,
    SchemaMismatch,
    build_figure,
    read_figure2_csv,
    render_bounds,
    render_figure2,
)

__all__ = [
    "BOUNDS_COLUMNS",
    "FIGURE2_COLUMNS",
    "PanelSpec",
    "SchemaMismatch",
    "build_figure",
    "read_figure2_csv",
    "render_bounds",
    "render_figure2",
]
