"""Figure renderers for dimersync CSV/JSON artifacts."""

__version__ = "0.1.0"

from .io import MapGrid, SchemaError, SpectrumCurve, TrajectoryTable, \
    read_map, read_spectrum, read_trajectory
from .render import FigureConfigError, FigureSpec, build_heatmap, \
    build_spectrum, build_trajectory, render

__all__ = [
    "MapGrid", "SchemaError", "SpectrumCurve", "TrajectoryTable",
    "read_map", "read_spectrum", "read_trajectory",
    "FigureConfigError", "FigureSpec", "build_heatmap", "build_spectrum",
    "build_trajectory", "render",
]
