"""Exact master-equation evolution of the full density matrix.

Brute-force reference path: the density matrix is vectorized and integrated
with an adaptive Runge-Kutta 5(4) scheme at tight tolerances.  This module
never uses the analytic eigenmode expansion, so the two can validate each
other.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .model import (
    ChainParams,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    build_nonhermitian_hamiltonian,
    excitation_index,
    jump_operators,
    site_operator,
)

RTOL_DEFAULT = 1e-9
ATOL_DEFAULT = 1e-12


@dataclass(frozen=True)
class InitialState:
    """Initial pure state of the chain.

    `amplitudes` stores the full state vector (length 2^N).  For states
    confined to the zero/one-excitation subspace, `one_excitation_amplitudes`
    exposes (c0, c1..cN) in the site basis.
    """

    n_spins: int
    amplitudes: np.ndarray
    label: str

    def __post_init__(self):
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"initial state norm {norm} differs from 1")

    @classmethod
    def vacuum(cls, n_spins):
        vec = np.zeros(2 ** n_spins, dtype=complex)
        vec[0] = 1.0
        return cls(n_spins, vec, "vacuum")

    @classmethod
    def plus_product(cls, n_spins):
        """(|ground> + |excited>)/sqrt(2) on every site."""
        single = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
        vec = single
        for _ in range(n_spins - 1):
            vec = np.kron(vec, single)
        return cls(n_spins, vec, "plus_product")

    @classmethod
    def one_excitation(cls, n_spins, c0, site_amplitudes, label=None):
        """c0 |vacuum> + sum_j c_j |site j excited>."""
        site_amplitudes = np.asarray(site_amplitudes, dtype=complex)
        if site_amplitudes.shape != (n_spins,):
            raise ValueError("need one amplitude per site")
        vec = np.zeros(2 ** n_spins, dtype=complex)
        vec[0] = c0
        for j in range(1, n_spins + 1):
            vec[excitation_index(j, n_spins)] = site_amplitudes[j - 1]
        return cls(n_spins, vec, label or "one_excitation")

    @classmethod
    def half_vacuum_pair(cls, n_spins, site_a, site_b):
        """|0>/sqrt(2) + (|site_a> + |site_b>)/2."""
        amps = np.zeros(n_spins, dtype=complex)
        amps[site_a - 1] = amps[site_b - 1] = 0.5
        return cls.one_excitation(n_spins, 1.0 / np.sqrt(2.0), amps,
                                  f"half_vacuum_pair:{site_a},{site_b}")

    @classmethod
    def half_vacuum_uniform(cls, n_spins):
        """|0>/sqrt(2) + sum_j |site j>/sqrt(2N)."""
        amps = np.full(n_spins, 1.0 / np.sqrt(2.0 * n_spins), dtype=complex)
        return cls.one_excitation(n_spins, 1.0 / np.sqrt(2.0), amps,
                                  "half_vacuum_uniform")

    @classmethod
    def half_vacuum_site(cls, n_spins, site):
        """(|0> + |site excited>)/sqrt(2)."""
        amps = np.zeros(n_spins, dtype=complex)
        amps[site - 1] = 1.0 / np.sqrt(2.0)
        return cls.one_excitation(n_spins, 1.0 / np.sqrt(2.0), amps,
                                  f"half_vacuum_site:{site}")

    @classmethod
    def from_vector(cls, vec, label="vector"):
        vec = np.asarray(vec, dtype=complex)
        n = int(np.log2(len(vec)))
        if 2 ** n != len(vec):
            raise ValueError("state vector length must be a power of two")
        return cls(n, vec, label)

    @classmethod
    def parse(cls, text, n_spins):
        """Build a state from a config descriptor string."""
        text = text.strip()
        if text == "vacuum":
            return cls.vacuum(n_spins)
        if text == "plus_product":
            return cls.plus_product(n_spins)
        if text == "half_vacuum_uniform":
            return cls.half_vacuum_uniform(n_spins)
        m = re.fullmatch(r"half_vacuum_pair:(\d+),(\d+)", text)
        if m:
            return cls.half_vacuum_pair(n_spins, int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"half_vacuum_site:(\d+)", text)
        if m:
            return cls.half_vacuum_site(n_spins, int(m.group(1)))
        m = re.fullmatch(r"amplitudes:(.+)", text)
        if m:
            values = [complex(v) for v in m.group(1).split(",")]
            if len(values) != n_spins + 1:
                raise ValueError("amplitudes descriptor needs c0 plus one value per site")
            vec = np.array(values, dtype=complex)
            vec = vec / np.linalg.norm(vec)
            return cls.one_excitation(n_spins, vec[0], vec[1:], text)
        raise ValueError(f"unknown initial state descriptor {text!r}")

    @property
    def is_one_excitation(self):
        """True when the state lives in the zero/one-excitation subspace."""
        allowed = {0} | {excitation_index(j, self.n_spins)
                         for j in range(1, self.n_spins + 1)}
        support = np.nonzero(np.abs(self.amplitudes) > 1e-14)[0]
        return all(int(i) in allowed for i in support)

    @property
    def one_excitation_amplitudes(self):
        """(c0, array of c_j) for states in the one-excitation subspace."""
        if not self.is_one_excitation:
            raise ValueError("state is not confined to the one-excitation subspace")
        c0 = self.amplitudes[0]
        cs = np.array([self.amplitudes[excitation_index(j, self.n_spins)]
                       for j in range(1, self.n_spins + 1)])
        return c0, cs

    def density_matrix(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass
class Trajectory:
    """Uniformly sampled real observable series with run metadata."""

    times: np.ndarray
    series: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        dts = np.diff(self.times)
        if len(dts) and (np.min(dts) <= 0 or np.ptp(dts) > 1e-9 * abs(dts[0])):
            raise ValueError("times must be a strictly increasing uniform grid")
        for label, values in self.series.items():
            if len(values) != len(self.times):
                raise ValueError(f"series {label!r} length mismatch")

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])

    def to_csv(self, path):
        labels = list(self.series)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(["t"] + labels) + "\n")
            cols = [self.times] + [self.series[lab] for lab in labels]
            for row in zip(*cols):
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")

    def write_meta(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.meta, fh, indent=2)


_SINGLE_OPS = {"sx": SIGMA_X, "sy": SIGMA_Y, "sz": SIGMA_Z,
               "n": SIGMA_PLUS @ SIGMA_MINUS}


def observable_matrix(label, n_spins):
    """Dense operator for a trajectory label such as sx_1 or sxsx_1_2.

    spsm_j_k labels the complex correlator sp_j sm_k; its real and
    imaginary parts are stored as separate series.
    """
    m = re.fullmatch(r"(sx|sy|sz|n)_(\d+)", label)
    if m:
        site = int(m.group(2))
        _check_site(site, n_spins)
        return site_operator(_SINGLE_OPS[m.group(1)], site - 1, n_spins)
    m = re.fullmatch(r"sxsx_(\d+)_(\d+)", label)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        _check_site(a, n_spins), _check_site(b, n_spins)
        return (site_operator(SIGMA_X, a - 1, n_spins)
                @ site_operator(SIGMA_X, b - 1, n_spins))
    m = re.fullmatch(r"spsm_(\d+)_(\d+)", label)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        _check_site(a, n_spins), _check_site(b, n_spins)
        return (site_operator(SIGMA_PLUS, a - 1, n_spins)
                @ site_operator(SIGMA_MINUS, b - 1, n_spins))
    raise ValueError(f"unknown observable label {label!r}")


def _check_site(site, n_spins):
    if not 1 <= site <= n_spins:
        raise ValueError(f"site {site} outside 1..{n_spins}")


def default_sample_step(params: ChainParams):
    """Sampling step resolving the fastest oscillation with 50 points."""
    omega_max = max(params.omega1, params.omega2 + 2.0 * abs(params.coupling))
    return (2.0 * np.pi / omega_max) / 50.0


def evolve(params: ChainParams, init: InitialState, t_end, dt_sample=None,
           observables=None, t_start=0.0, rtol=RTOL_DEFAULT, atol=ATOL_DEFAULT,
           check_state=True) -> Trajectory:
    """Integrate the master equation and sample observables on a uniform grid.

    The grid runs from t_start to at least t_end in steps of dt_sample.
    Observables default to the coherences sx_j of every site.  Complex
    spsm labels produce <label>_re / <label>_im series.
    """
    if init.n_spins != params.n_spins:
        raise ValueError("initial state size does not match chain size")
    if t_end <= t_start:
        raise ValueError("t_end must exceed t_start")
    dt = default_sample_step(params) if dt_sample is None else float(dt_sample)
    if dt <= 0:
        raise ValueError("dt_sample must be positive")
    if observables is None:
        observables = [f"sx_{j}" for j in range(1, params.n_spins + 1)]
    observables = list(observables)

    n_steps = int(np.ceil((t_end - t_start) / dt - 1e-9))
    times = t_start + dt * np.arange(n_steps + 1)

    k = build_nonhermitian_hamiltonian(params)
    k_dag = k.conj().T
    jumps = [(2.0 * g, sm, sm.conj().T) for g, sm in jump_operators(params)]
    dim = params.dim

    def rhs(_t, y):
        rho = y.reshape(dim, dim)
        out = -1j * (k @ rho - rho @ k_dag)
        for two_gamma, sm, sp in jumps:
            out += two_gamma * (sm @ rho @ sp)
        return out.ravel()

    sol = solve_ivp(rhs, (0.0, times[-1]), init.density_matrix().ravel(),
                    t_eval=times, rtol=rtol, atol=atol, method="RK45")
    if not sol.success:
        raise RuntimeError(f"master-equation integration failed: {sol.message}")
    rhos = sol.y.T.reshape(len(times), dim, dim)

    if check_state:
        traces = np.einsum("tii->t", rhos)
        if np.max(np.abs(traces - 1.0)) > 1e-8:
            raise RuntimeError("trace drifted beyond 1e-8 during integration")

    mats = {label: observable_matrix(label, params.n_spins) for label in observables}
    series = {}
    for label, mat in mats.items():
        values = np.einsum("ij,tji->t", mat, rhos)
        if label.startswith("spsm_"):
            series[label + "_re"] = values.real.copy()
            series[label + "_im"] = values.imag.copy()
        else:
            series[label] = values.real.copy()

    meta = {
        "params": {
            "n_spins": params.n_spins, "omega1": params.omega1,
            "omega2": params.omega2, "coupling": params.coupling,
            "gamma1": params.gamma1, "gamma2": params.gamma2,
        },
        "initial_state": init.label,
        "dt_sample": dt,
        "rtol": rtol,
        "atol": atol,
    }
    return Trajectory(times, series, meta)


def equal_time_correlator(params: ChainParams, init: InitialState, t_end,
                          dt_sample=None, pair=(1, 2), **kwargs) -> Trajectory:
    """Time series of the equal-time <sx_j sx_k> correlator."""
    label = f"sxsx_{pair[0]}_{pair[1]}"
    return evolve(params, init, t_end, dt_sample, observables=[label], **kwargs)


def evolve_density_matrices(params: ChainParams, init: InitialState, times,
                            rtol=RTOL_DEFAULT, atol=ATOL_DEFAULT):
    """Density matrices on an arbitrary increasing time grid (test support)."""
    k = build_nonhermitian_hamiltonian(params)
    k_dag = k.conj().T
    jumps = [(2.0 * g, sm, sm.conj().T) for g, sm in jump_operators(params)]
    dim = params.dim

    def rhs(_t, y):
        rho = y.reshape(dim, dim)
        out = -1j * (k @ rho - rho @ k_dag)
        for two_gamma, sm, sp in jumps:
            out += two_gamma * (sm @ rho @ sp)
        return out.ravel()

    times = np.asarray(times, dtype=float)
    sol = solve_ivp(rhs, (0.0, times[-1]), init.density_matrix().ravel(),
                    t_eval=times, rtol=rtol, atol=atol, method="RK45")
    if not sol.success:
        raise RuntimeError(f"master-equation integration failed: {sol.message}")
    return sol.y.T.reshape(len(times), dim, dim)
