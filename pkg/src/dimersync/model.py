"""Physical model of the dissipative dimer spin chain.

The chain is an open-boundary XX model with staggered on-site frequencies
(omega1 on odd sites, omega2 on even sites, 1-based) and staggered local
decay rates (gamma1/gamma2).  The relevant generators are

    H = sum_j (omega_j/2) sz_j + lambda * sum_{j<N} (sp_j sm_{j+1} + h.c.)
    L[rho] = i [rho, H] + sum_j gamma_j (2 sm_j rho sp_j - {sp_j sm_j, rho})

together with the non-Hermitian Hamiltonian obtained by dropping the jump
terms, which carries the full eigenvalue content of the slow dynamics.

All matrices are dense; the chain size is capped at 12 spins (dimension
4096).  Frequencies and rates are dimensionless, measured in units of the
odd-site frequency unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

MAX_SPINS = 12

# single-site operators; basis index 0 = ground (spin down), 1 = excited
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.conj().T
SIGMA_X = SIGMA_PLUS + SIGMA_MINUS
SIGMA_Y = -1j * (SIGMA_PLUS - SIGMA_MINUS)
NUMBER = SIGMA_PLUS @ SIGMA_MINUS
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ChainParams:
    """Full physical specification of the dimer chain.

    Sites are 1-based in all documentation: odd sites carry
    (omega1, gamma1), even sites (omega2, gamma2).
    """

    n_spins: int
    omega1: float
    omega2: float
    coupling: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        if self.n_spins < 2 or self.n_spins % 2 != 0:
            raise ValueError("n_spins must be an even integer >= 2")
        if self.n_spins > MAX_SPINS:
            raise ValueError(f"n_spins={self.n_spins} exceeds dense cap {MAX_SPINS}")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError("decay rates must be nonnegative")
        for name in ("omega1", "omega2", "coupling", "gamma1", "gamma2"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @classmethod
    def from_detuning(cls, n_spins, delta, coupling, rate_over_freq=0.05, omega1=1.0):
        """Build a chain with gamma_j = rate_over_freq * omega_j on both sublattices."""
        omega2 = omega1 - delta
        return cls(n_spins, omega1, omega2, coupling,
                   rate_over_freq * omega1, rate_over_freq * omega2)

    @property
    def delta(self):
        """Detuning omega1 - omega2 between the two sublattices."""
        return self.omega1 - self.omega2

    @property
    def dim(self):
        return 2 ** self.n_spins

    def site_frequency(self, site):
        """On-site frequency of 1-based site index."""
        return self.omega1 if site % 2 == 1 else self.omega2

    def site_rate(self, site):
        """Local decay rate of 1-based site index."""
        return self.gamma1 if site % 2 == 1 else self.gamma2

    def complex_frequencies(self):
        """(omega1 - i*gamma1, omega2 - i*gamma2) for the two sublattices."""
        return (self.omega1 - 1j * self.gamma1, self.omega2 - 1j * self.gamma2)


def site_operator(op, site, n_spins):
    """Embed a single-site operator at 0-based position `site` of the chain."""
    mats = [op if i == site else IDENTITY_2 for i in range(n_spins)]
    return reduce(np.kron, mats)


def excitation_index(site, n_spins):
    """Basis index of the state with only 1-based `site` excited."""
    return 2 ** (n_spins - site)


def one_excitation_indices(n_spins):
    """Basis indices of single-excitation states, ordered by site 1..N."""
    return np.array([excitation_index(j, n_spins) for j in range(1, n_spins + 1)])


def build_hamiltonian(params: ChainParams) -> np.ndarray:
    """Dense chain Hamiltonian (Hermitian, open boundary)."""
    n = params.n_spins
    dim = params.dim
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(n):
        h += 0.5 * params.site_frequency(i + 1) * site_operator(SIGMA_Z, i, n)
    for i in range(n - 1):
        hop = site_operator(SIGMA_PLUS, i, n) @ site_operator(SIGMA_MINUS, i + 1, n)
        h += params.coupling * (hop + hop.conj().T)
    return h


def build_nonhermitian_hamiltonian(params: ChainParams) -> np.ndarray:
    """H - i * sum_j gamma_j sp_j sm_j (the generator of the no-jump evolution)."""
    n = params.n_spins
    k = build_hamiltonian(params)
    for i in range(n):
        k -= 1j * params.site_rate(i + 1) * site_operator(NUMBER, i, n)
    return k


def jump_operators(params: ChainParams):
    """[(gamma_j, sm_j)] for all sites with gamma_j > 0 skipped when zero."""
    n = params.n_spins
    return [(params.site_rate(i + 1), site_operator(SIGMA_MINUS, i, n))
            for i in range(n) if params.site_rate(i + 1) > 0]


def apply_liouvillian(params: ChainParams, rho: np.ndarray) -> np.ndarray:
    """Right-hand side of the master equation, d(rho)/dt.

    Requires rho Hermitian (1e-9) with unit trace (1e-9); the returned
    matrix is traceless to machine precision.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (params.dim, params.dim):
        raise ValueError(f"rho has shape {rho.shape}, expected {(params.dim, params.dim)}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
        raise ValueError("rho is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-9:
        raise ValueError("rho does not have unit trace")
    return _liouvillian_rhs(params, rho)


def _liouvillian_rhs(params: ChainParams, rho: np.ndarray) -> np.ndarray:
    """Master-equation generator without the state-validity checks."""
    k = build_nonhermitian_hamiltonian(params)
    out = -1j * (k @ rho - rho @ k.conj().T)
    for gamma, sm in jump_operators(params):
        out += 2.0 * gamma * (sm @ rho @ sm.conj().T)
    return out


def total_number_operator(n_spins):
    """Total excitation number sum_j sp_j sm_j."""
    dim = 2 ** n_spins
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(n_spins):
        out += site_operator(NUMBER, i, n_spins)
    return out


def one_excitation_block(params: ChainParams) -> np.ndarray:
    """Single-excitation block of the no-jump generator, referenced to the vacuum.

    The tridiagonal N x N matrix with (omega_j - i*gamma_j) on the diagonal
    and the hopping strength on the first off-diagonals.  Its eigenvalues are
    the complex mode frequencies that control all coherence dynamics; they
    equal the eigenvalues of the corresponding block of the full operator
    shifted by the all-ground-state energy <0|H|0>.
    """
    n = params.n_spins
    diag = [params.site_frequency(j) - 1j * params.site_rate(j)
            for j in range(1, n + 1)]
    block = np.diag(diag).astype(complex)
    idx = np.arange(n - 1)
    block[idx, idx + 1] = params.coupling
    block[idx + 1, idx] = params.coupling
    return block
