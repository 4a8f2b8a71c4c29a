"""Closed-form dynamics in the one-excitation sector.

Every quantity is an explicit sum over the analytic eigenmodes: coherences
evolve with single mode exponents, equal-time pair correlators with pairwise
combined exponents, and two-time correlations from the vacuum follow the
regression identity, i.e. the coherence expansion restarted from an excited
site.  No numerical integration happens anywhere in this module.

Inner products follow the biorthogonal pairing: a left eigenvector is the
transpose of the corresponding right one, so overlaps with mode amplitudes
are taken without complex conjugation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dynamics import InitialState, Trajectory
from .model import ChainParams
from .spectrum import open_boundary_modes


@dataclass(frozen=True)
class ModeWeights:
    """Expansion weights of an initial state over the eigenmode basis.

    coherence_weights[l, j] multiplies exp(-(i nu_l + G_l) t) in <sx_j(t)>.
    correlator_weights[(j, k)][l, m] multiplies the pairwise exponent in
    <sx_j sx_k>(t).  two_time_weights[(j, k)][l] multiplies the single-mode
    exponent of <sm_j(tau) sp_k(0)> from the vacuum.
    """

    eigenvalues: np.ndarray
    coherence_weights: np.ndarray
    correlator_weights: dict
    two_time_weights: dict


def _modes_arrays(params: ChainParams):
    modes = open_boundary_modes(params)
    eigenvalues = np.array([m.eigenvalue for m in modes])
    amplitudes = np.array([m.site_amplitudes for m in modes])  # L x N
    return eigenvalues, amplitudes


def _require_one_excitation(init: InitialState):
    if not init.is_one_excitation:
        raise ValueError("closed-form evolution requires a one-excitation initial state")
    return init.one_excitation_amplitudes


def mode_weights(params: ChainParams, init: InitialState, pairs=()) -> ModeWeights:
    """Expansion weights for coherences and for the requested site pairs."""
    c0, cs = _require_one_excitation(init)
    eigenvalues, amps = _modes_arrays(params)
    overlaps = amps @ cs                       # transpose pairing with the state
    coherence = (overlaps * np.conj(c0))[:, None] * amps
    correlator = {}
    two_time = {}
    for (j, k) in pairs:
        aj, ak = amps[:, j - 1], amps[:, k - 1]
        correlator[(j, k)] = np.outer(overlaps * ak, np.conj(overlaps * aj))
        two_time[(j, k)] = ak * aj
    return ModeWeights(eigenvalues, coherence, correlator, two_time)


def coherence_evolution(params: ChainParams, init: InitialState, times) -> Trajectory:
    """<sx_j(t)> for every site from the eigenmode expansion."""
    times = np.asarray(times, dtype=float)
    weights = mode_weights(params, init)
    phases = np.exp(-1j * np.outer(times, weights.eigenvalues))   # T x L
    values = 2.0 * np.real(phases @ weights.coherence_weights)    # T x N
    series = {f"sx_{j}": values[:, j - 1].copy()
              for j in range(1, params.n_spins + 1)}
    return Trajectory(times, series, {"path": "one_excitation",
                                      "initial_state": init.label})


def correlator_evolution(params: ChainParams, init: InitialState, times,
                         pair=(1, 2)) -> Trajectory:
    """Equal-time <sx_j sx_k>(t) from the double eigenmode expansion."""
    times = np.asarray(times, dtype=float)
    weights = mode_weights(params, init, pairs=[tuple(pair)])
    w = weights.correlator_weights[tuple(pair)]
    phases = np.exp(-1j * np.outer(times, weights.eigenvalues))
    values = 2.0 * np.real(np.einsum("tl,lm,tm->t", phases, w, phases.conj()))
    label = f"sxsx_{pair[0]}_{pair[1]}"
    return Trajectory(times, {label: values},
                      {"path": "one_excitation", "initial_state": init.label})


@dataclass(frozen=True)
class TwoTimeCorrelation:
    """Complex <sm_j(tau) sp_k(0)> evaluated in the vacuum steady state."""

    pair: tuple
    taus: np.ndarray
    values: np.ndarray

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("tau,re,im\n")
            for t, v in zip(self.taus, self.values):
                fh.write(f"{t:.17g},{v.real:.17g},{v.imag:.17g}\n")


def two_time_correlation(params: ChainParams, pair, taus) -> TwoTimeCorrelation:
    """Vacuum two-time correlation via the regression identity.

    Equals the coherence expansion restarted from the state with site k
    excited: the weight of mode l is amp_l(k) * amp_l(j).
    """
    j, k = pair
    taus = np.asarray(taus, dtype=float)
    eigenvalues, amps = _modes_arrays(params)
    v = amps[:, k - 1] * amps[:, j - 1]
    values = np.exp(-1j * np.outer(taus, eigenvalues)) @ v
    return TwoTimeCorrelation((j, k), taus, values)


@dataclass(frozen=True)
class LorentzianSpectrum:
    """Closed-form correlation spectrum: a signed sum of Lorentzian terms.

    values[i] = (1/2pi) sum_l [G_l Re(v_l) + (nu + nu_l) Im(v_l)]
                              / [G_l^2 + (nu + nu_l)^2]

    components holds the per-mode (nu_l, G_l, v_l) so peak positions and
    widths are available without any curve fitting.  The absolute value
    |S| is what peak-shape comparisons use.
    """

    pair: tuple
    nu_grid: np.ndarray
    values: np.ndarray
    components: tuple

    @property
    def abs_values(self):
        return np.abs(self.values)

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("nu,S,absS\n")
            for nu, s in zip(self.nu_grid, self.values):
                fh.write(f"{nu:.17g},{s:.17g},{abs(s):.17g}\n")

    def to_json(self) -> str:
        return json.dumps({
            "pair": list(self.pair),
            "components": [
                {"frequency": nu, "decay_rate": g,
                 "weight_re": v.real, "weight_im": v.imag}
                for nu, g, v in self.components
            ],
        }, indent=2)


def default_frequency_grid(params: ChainParams, n_points=2001):
    """Symmetric grid spanning twice the largest mode frequency."""
    eigenvalues, _ = _modes_arrays(params)
    span = 2.0 * np.max(np.abs(eigenvalues.real))
    if span == 0.0:
        span = 1.0
    return np.linspace(-span, span, n_points)


def correlation_spectrum(params: ChainParams, pair, nu_grid=None) -> LorentzianSpectrum:
    """Evaluate the Lorentzian sum of the two-time correlation transform."""
    j, k = pair
    if nu_grid is None:
        nu_grid = default_frequency_grid(params)
    nu_grid = np.asarray(nu_grid, dtype=float)
    eigenvalues, amps = _modes_arrays(params)
    v = amps[:, k - 1] * amps[:, j - 1]
    freqs, rates = eigenvalues.real, -eigenvalues.imag
    shifted = nu_grid[:, None] + freqs[None, :]
    terms = (rates[None, :] * v.real[None, :] + shifted * v.imag[None, :]) \
        / (rates[None, :] ** 2 + shifted ** 2)
    values = terms.sum(axis=1) / (2.0 * np.pi)
    components = tuple((float(f), float(g), complex(w))
                       for f, g, w in zip(freqs, rates, v))
    return LorentzianSpectrum((j, k), nu_grid, values, components)
