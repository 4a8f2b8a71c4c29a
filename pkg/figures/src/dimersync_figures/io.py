"""Readers for the simulator's CSV/JSON artifacts.

Every reader validates against the documented schema and raises SchemaError
on any mismatch; rendering never works around malformed inputs.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """Artifact does not match its documented schema."""


def _read_rows(path):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            rows = list(reader)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not header:
        raise SchemaError(f"{path}: empty file")
    return header, rows


@dataclass(frozen=True)
class MapGrid:
    """Rectangular synchronization map."""

    axis_names: tuple
    axis1: np.ndarray
    axis2: np.ndarray
    c_t: np.ndarray        # shape (len(axis1), len(axis2)), NaN where flagged
    ratio_21: np.ndarray
    ratio_23: np.ndarray
    flags: np.ndarray      # object array of flag strings


def read_map(path) -> MapGrid:
    header, rows = _read_rows(path)
    if len(header) != 6 or header[2:] != ["c_t", "ratio_21", "ratio_23", "flags"]:
        raise SchemaError(
            f"{path}: expected <axis1>,<axis2>,c_t,ratio_21,ratio_23,flags header, "
            f"got {header}")
    if not rows:
        raise SchemaError(f"{path}: no grid cells")
    try:
        a1 = np.array([float(r[0]) for r in rows])
        a2 = np.array([float(r[1]) for r in rows])
        values = [[float(r[i]) if r[i] != "" else np.nan for i in (2, 3, 4)]
                  for r in rows]
    except (ValueError, IndexError) as exc:
        raise SchemaError(f"{path}: malformed row: {exc}") from exc
    flags = np.array([r[5] if len(r) > 5 else "" for r in rows], dtype=object)

    axis1 = np.unique(a1)
    axis2 = np.unique(a2)
    if len(axis1) * len(axis2) != len(rows):
        raise SchemaError(f"{path}: grid is not rectangular "
                          f"({len(axis1)}x{len(axis2)} vs {len(rows)} rows)")
    shape = (len(axis1), len(axis2))
    grids = [np.full(shape, np.nan) for _ in range(3)]
    flag_grid = np.full(shape, "", dtype=object)
    seen = set()
    for row_idx, (x, y) in enumerate(zip(a1, a2)):
        i = int(np.searchsorted(axis1, x))
        j = int(np.searchsorted(axis2, y))
        if (i, j) in seen:
            raise SchemaError(f"{path}: duplicate grid cell ({x}, {y})")
        seen.add((i, j))
        for g, value in zip(grids, values[row_idx]):
            g[i, j] = value
        flag_grid[i, j] = flags[row_idx]
    return MapGrid((header[0], header[1]), axis1, axis2,
                   grids[0], grids[1], grids[2], flag_grid)


@dataclass(frozen=True)
class SpectrumCurve:
    nu: np.ndarray
    values: np.ndarray
    abs_values: np.ndarray
    label: str


def read_spectrum(path) -> SpectrumCurve:
    header, rows = _read_rows(path)
    if header != ["nu", "S", "absS"]:
        raise SchemaError(f"{path}: expected nu,S,absS header, got {header}")
    if not rows:
        raise SchemaError(f"{path}: empty spectrum")
    try:
        data = np.array([[float(v) for v in r] for r in rows])
    except (ValueError, IndexError) as exc:
        raise SchemaError(f"{path}: malformed row: {exc}") from exc
    label = _spectrum_label(path)
    return SpectrumCurve(data[:, 0], data[:, 1], data[:, 2], label)


def _spectrum_label(path):
    meta_path = os.path.splitext(path)[0] + ".meta.json"
    if os.path.exists(meta_path):
        try:
            with open(meta_path, encoding="utf-8") as fh:
                meta = json.load(fh)
            return (f"delta={meta['delta']:g}, "
                    f"coupling={meta['coupling']:g}")
        except (OSError, KeyError, ValueError, TypeError):
            pass
    return os.path.splitext(os.path.basename(path))[0]


@dataclass(frozen=True)
class TrajectoryTable:
    times: np.ndarray
    series: dict


def read_trajectory(path) -> TrajectoryTable:
    header, rows = _read_rows(path)
    if not header or header[0] != "t" or len(header) < 2:
        raise SchemaError(f"{path}: expected t,<series...> header, got {header}")
    if not rows:
        raise SchemaError(f"{path}: empty trajectory")
    width = len(header)
    for r in rows:
        if len(r) != width:
            raise SchemaError(f"{path}: row width {len(r)} != header width {width}")
    try:
        data = np.array([[float(v) for v in r] for r in rows])
    except ValueError as exc:
        raise SchemaError(f"{path}: malformed row: {exc}") from exc
    series = {name: data[:, i + 1] for i, name in enumerate(header[1:])}
    return TrajectoryTable(data[:, 0], series)
