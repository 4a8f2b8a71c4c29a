"""Synchronization measures on sampled trajectories.

Windowed Pearson correlation with trapezoidal time averages, one-sided
delay maximization on the sampling grid, and the all-pairs product measure.
A window whose variance falls below VARIANCE_FLOOR is treated as a decayed
constant signal: the pair is flagged undefined and contributes 0 to the
product measure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

VARIANCE_FLOOR = 1e-18
MIN_WINDOW_SAMPLES = 10


@dataclass(frozen=True)
class SyncReport:
    """Pearson value of one pair, with and without delay maximization."""

    pair: tuple
    c_value: float
    c_max_delay: float
    tau_star: float
    window: tuple          # (t_start, width)
    undefined: bool = False


@dataclass(frozen=True)
class GlobalSync:
    """Product of delay-maximized pair correlations over all site pairs."""

    c_t: float
    pair_matrix: np.ndarray
    reports: tuple
    window: tuple
    flagged_pairs: tuple

    def to_json(self) -> str:
        return json.dumps({
            "c_t": self.c_t,
            "window": list(self.window),
            "pair_matrix": [[v for v in row] for row in self.pair_matrix],
            "flagged_pairs": [list(p) for p in self.flagged_pairs],
            "pairs": [
                {"pair": list(r.pair), "c_value": r.c_value,
                 "c_max_delay": r.c_max_delay, "tau_star": r.tau_star,
                 "undefined": r.undefined}
                for r in self.reports
            ],
        }, indent=2)


def _uniform_dt(times):
    dts = np.diff(times)
    if np.min(dts) <= 0 or np.ptp(dts) > 1e-9 * dts[0]:
        raise ValueError("times must be a strictly increasing uniform grid")
    return float(dts[0])


def _window_slice(times, t_start, width, dt):
    i0 = int(round((t_start - times[0]) / dt))
    wlen = int(round(width / dt)) + 1
    if i0 < 0 or i0 + wlen > len(times):
        raise ValueError("window lies outside the sampled time range")
    if abs(times[0] + i0 * dt - t_start) > 0.5 * dt:
        raise ValueError("window start does not align with the sampling grid")
    if wlen < MIN_WINDOW_SAMPLES:
        raise ValueError(f"window holds {wlen} samples, need >= {MIN_WINDOW_SAMPLES}")
    return i0, wlen


def _trapezoid_weights(wlen):
    w = np.ones(wlen)
    w[0] = w[-1] = 0.5
    return w


def pearson(times, x1, x2, t_start, width) -> float:
    """Windowed Pearson correlation; NaN when a windowed variance underflows."""
    dt = _uniform_dt(times)
    i0, wlen = _window_slice(times, t_start, width, dt)
    w = _trapezoid_weights(wlen)
    wsum = w.sum()
    a = np.asarray(x1, dtype=float)[i0:i0 + wlen]
    b = np.asarray(x2, dtype=float)[i0:i0 + wlen]
    da = a - (a * w).sum() / wsum
    db = b - (b * w).sum() / wsum
    va = (da * da * w).sum() / wsum
    vb = (db * db * w).sum() / wsum
    if va < VARIANCE_FLOOR or vb < VARIANCE_FLOOR:
        return float("nan")
    c = (da * db * w).sum() / wsum / np.sqrt(va * vb)
    return float(np.clip(c, -1.0, 1.0))


def _delayed_pearson_scan(times, x1, x2, t_start, width, tau_max):
    """Correlations against x2 delayed by every grid step in [0, tau_max]."""
    dt = _uniform_dt(times)
    i0, wlen = _window_slice(times, t_start, width, dt)
    n_shift = int(np.floor(tau_max / dt + 1e-9))
    if i0 + n_shift + wlen > len(times):
        raise ValueError("series too short for the requested delay range")
    w = _trapezoid_weights(wlen)
    wsum = w.sum()
    a = np.asarray(x1, dtype=float)[i0:i0 + wlen]
    da = a - (a * w).sum() / wsum
    va = (da * da * w).sum() / wsum
    if va < VARIANCE_FLOOR:
        return None, dt
    x2 = np.asarray(x2, dtype=float)
    # centering leaves covariance and variance invariant but avoids the
    # catastrophic cancellation of E[x^2] - E[x]^2 for near-constant series
    scan = x2[i0:i0 + n_shift + wlen]
    x2c = x2[i0:] - scan.mean()
    windows = sliding_window_view(x2c, wlen)[:n_shift + 1]
    means = windows @ w / wsum
    variances = windows ** 2 @ w / wsum - means ** 2
    # E_w[da * b] equals the covariance because da has zero weighted mean
    covs = windows @ (da * w) / wsum
    with np.errstate(invalid="ignore", divide="ignore"):
        cs = covs / np.sqrt(va * variances)
    cs[variances < VARIANCE_FLOOR] = np.nan
    return np.clip(cs, -1.0, 1.0), dt


def pearson_max_delay(times, x1, x2, t_start, width, tau_max) -> SyncReport:
    """Maximize the windowed Pearson correlation over delays of the second series."""
    pair = (1, 2)
    cs, dt = _delayed_pearson_scan(times, x1, x2, t_start, width, tau_max)
    if cs is None or np.all(np.isnan(cs)):
        return SyncReport(pair, float("nan"), float("nan"), 0.0,
                          (t_start, width), undefined=True)
    best = int(np.nanargmax(cs))
    c0 = float(cs[0]) if not np.isnan(cs[0]) else float("nan")
    return SyncReport(pair, c0, float(cs[best]), best * dt, (t_start, width))


def global_sync(times, coherences, t_start, width, tau_max) -> GlobalSync:
    """Delay-maximized Pearson for every site pair and their signed product.

    `coherences` is a (samples, sites) array.  Pairs flagged undefined by
    the variance floor contribute a factor 0.
    """
    x = np.asarray(coherences, dtype=float)
    n_sites = x.shape[1]
    matrix = np.eye(n_sites)
    reports = []
    flagged = []
    c_t = 1.0
    for i in range(n_sites):
        for j in range(i + 1, n_sites):
            rep = pearson_max_delay(times, x[:, i], x[:, j], t_start, width, tau_max)
            rep = SyncReport((i + 1, j + 1), rep.c_value, rep.c_max_delay,
                             rep.tau_star, rep.window, rep.undefined)
            reports.append(rep)
            if rep.undefined:
                flagged.append((i + 1, j + 1))
                matrix[i, j] = matrix[j, i] = 0.0
                c_t *= 0.0
            else:
                matrix[i, j] = matrix[j, i] = rep.c_max_delay
                c_t *= rep.c_max_delay
    return GlobalSync(float(c_t), matrix, tuple(reports),
                      (t_start, width), tuple(flagged))
