"""Figure builders for the simulator artifacts.

Each build_* function returns a matplotlib Figure; the render_* wrappers
save to file with fixed metadata so identical inputs reproduce identical
bytes.  Timestamps are never embedded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, read_map, read_spectrum, read_trajectory

RATIO_21_LEVELS = (0.9, 0.75, 0.6)
RATIO_23_LEVELS = (0.8, 0.5, 0.2)
PNG_METADATA = {"Software": "dimersync-figures"}
DPI = 150


class FigureConfigError(ValueError):
    """Invalid figure specification."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple
    cmap: str = "viridis"
    contours_21: tuple = RATIO_21_LEVELS
    contours_23: tuple = RATIO_23_LEVELS
    observables: tuple = ()
    rolling_input: str | None = None
    axis_unit: str = "omega1"

    def __post_init__(self):
        if self.kind not in ("heatmap", "spectrum", "trajectory"):
            raise FigureConfigError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise FigureConfigError("figure needs at least one input artifact")


def _axis_label(name, unit):
    return f"{name} / {unit}"


def build_heatmap(spec: FigureSpec):
    if len(spec.inputs) != 1:
        raise FigureConfigError("heatmap takes exactly one map artifact")
    grid = read_map(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(5.2, 4.0), dpi=DPI)
    mesh = ax.pcolormesh(grid.axis1, grid.axis2, grid.c_t.T,
                         cmap=spec.cmap, vmin=0.0, vmax=1.0, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="global synchronization")
    for values, levels, style in ((grid.ratio_21, spec.contours_21, "solid"),
                                  (grid.ratio_23, spec.contours_23, "dashed")):
        finite = values[np.isfinite(values)]
        if finite.size == 0 or np.ptp(finite) == 0:
            continue    # constant field has no contours
        levels = sorted(set(levels))
        widths = [0.8 + 0.8 * rank for rank in range(len(levels))]
        ax.contour(grid.axis1, grid.axis2, values.T, levels=levels,
                   colors="white", linestyles=style, linewidths=widths)
    ax.set_xlim(grid.axis1[0], grid.axis1[-1])
    ax.set_ylim(grid.axis2[0], grid.axis2[-1])
    ax.set_xlabel(_axis_label(grid.axis_names[0], spec.axis_unit))
    ax.set_ylabel(_axis_label(grid.axis_names[1], spec.axis_unit))
    fig.tight_layout()
    return fig


def build_spectrum(spec: FigureSpec):
    curves = [read_spectrum(path) for path in spec.inputs]
    base = curves[0].nu
    for curve in curves[1:]:
        if len(curve.nu) != len(base) or np.max(np.abs(curve.nu - base)) > 1e-12:
            raise SchemaError("overlaid spectra use different frequency grids")
    fig, ax = plt.subplots(figsize=(5.2, 3.6), dpi=DPI)
    for curve in curves:
        ax.plot(curve.nu, curve.abs_values, label=curve.label)
    ax.set_xlabel(_axis_label("frequency", spec.axis_unit))
    ax.set_ylabel("|S|")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return fig


def build_trajectory(spec: FigureSpec):
    if len(spec.inputs) != 1:
        raise FigureConfigError("trajectory takes exactly one trajectory artifact")
    table = read_trajectory(spec.inputs[0])
    labels = spec.observables or tuple(table.series)
    missing = [lab for lab in labels if lab not in table.series]
    if missing:
        raise SchemaError(f"trajectory lacks requested series {missing}")
    fig, ax = plt.subplots(figsize=(6.0, 3.6), dpi=DPI)
    for lab in labels:
        ax.plot(table.times, table.series[lab], label=lab, linewidth=0.9)
    ax.set_xlabel(_axis_label("time", f"1/{spec.axis_unit}"))
    ax.set_ylabel("coherence")
    ax.legend(loc="upper right", fontsize=8)
    if spec.rolling_input:
        rolling = read_trajectory(spec.rolling_input)
        if "c_total" not in rolling.series:
            raise SchemaError("rolling synchronization artifact lacks c_total")
        inset = ax.inset_axes([0.62, 0.12, 0.34, 0.32])
        inset.plot(rolling.times, rolling.series["c_total"], color="black",
                   linewidth=0.9)
        inset.set_ylim(-1.05, 1.05)
        inset.set_title("global sync", fontsize=7)
        inset.tick_params(labelsize=6)
    fig.tight_layout()
    return fig


_BUILDERS = {"heatmap": build_heatmap, "spectrum": build_spectrum,
             "trajectory": build_trajectory}


def render(spec: FigureSpec, out_path):
    """Build the figure and write a deterministic PNG."""
    fig = _BUILDERS[spec.kind](spec)
    try:
        fig.savefig(out_path, dpi=DPI, metadata=PNG_METADATA)
    finally:
        plt.close(fig)
    return out_path
