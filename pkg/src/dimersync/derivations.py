"""Physical-parameter derivations for the optical-lattice realization.

Two small closed-form maps: the two-band Bose-Hubbard parameters of a
bichromatic lattice onto the effective spin couplings, and the Lorentzian
profile of the laser-engineered motional decay rate.  Both use the
approximate (detuning-independent) forms valid in the strong-repulsion
hierarchy U >> t.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass


@dataclass(frozen=True)
class BoseHubbardParams:
    """Tunneling rates and on-site repulsions (kHz) of the two lowest bands."""

    t0: float
    t1: float
    u00: float
    u11: float
    u01: float

    def __post_init__(self):
        for name in ("t0", "t1", "u00", "u11", "u01"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if min(self.u00, self.u11, self.u01) < 5.0 * max(self.t0, self.t1):
            warnings.warn(
                "repulsion energies are not large compared to tunneling; "
                "the perturbative spin mapping may be inaccurate",
                stacklevel=3,
            )


@dataclass(frozen=True)
class EffectiveSpinParams:
    """Spin-model couplings produced by second-order tunneling (kHz)."""

    exchange_coupling: float   # XX coupling; enters the chain model via its magnitude
    field_shift: float         # uniform shift of the local field
    ising_coupling: float      # zz coupling; tuned to zero in the chain model


def effective_spin_params(bh: BoseHubbardParams) -> EffectiveSpinParams:
    """Map Bose-Hubbard parameters to effective spin couplings.

    exchange = -2 t0 t1 / u01
    field    =  (t0^2/u00 - t1^2/u11) / 2
    ising    = -(t0^2/u00 + t1^2/u11 - (t0^2 + t1^2)/u01) / 2
    """
    exchange = -2.0 * bh.t0 * bh.t1 / bh.u01
    field = 0.5 * (bh.t0 ** 2 / bh.u00 - bh.t1 ** 2 / bh.u11)
    ising = -0.5 * (bh.t0 ** 2 / bh.u00 + bh.t1 ** 2 / bh.u11
                    - (bh.t0 ** 2 + bh.t1 ** 2) / bh.u01)
    return EffectiveSpinParams(exchange, field, ising)


@dataclass(frozen=True)
class CoolingParams:
    """Effective two-level cooling parameters after adiabatic elimination.

    lamb_dicke is dimensionless; the remaining entries share one frequency
    unit.  `motional_freq` is the full trap frequency of the addressed site.
    """

    lamb_dicke: float
    rabi_eff: float
    decay_internal: float
    dephasing: float
    effective_detuning: float
    motional_freq: float

    def __post_init__(self):
        if self.lamb_dicke > 0.3:
            warnings.warn(
                "Lamb-Dicke parameter is not small; the engineered-rate "
                "formula assumes eta << 1",
                stacklevel=3,
            )


def engineered_decay_rate(cooling: CoolingParams) -> float:
    """Lorentzian sideband-cooling rate of the addressed motional transition.

    rate = eta^2 Omega^2 (G + g) / ((G + g)^2 + (detuning - motional_freq)^2)

    with G + g the total internal linewidth.  Peaks on resonance with value
    eta^2 Omega^2 / (G + g) and falls to half of it one linewidth away.
    """
    width = cooling.decay_internal + cooling.dephasing
    if width <= 0:
        raise ValueError("total internal linewidth must be positive")
    offset = cooling.effective_detuning - cooling.motional_freq
    return (cooling.lamb_dicke ** 2 * cooling.rabi_eff ** 2
            * width / (width ** 2 + offset ** 2))
