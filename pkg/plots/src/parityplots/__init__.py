"""Figure rendering for paritylab result CSVs."""

from .render import EXPECTED_COLUMNS, PlotSpec, RenderError, RenderResult, Series, load_series, render

__all__ = [
    "EXPECTED_COLUMNS",
    "PlotSpec",
    "RenderError",
    "RenderResult",
    "Series",
    "load_series",
    "render",
]
