"""Transient quantum synchronization in dissipative dimer spin chains."""

__version__ = "0.1.0"

from .model import (
    ChainParams,
    apply_liouvillian,
    build_hamiltonian,
    build_nonhermitian_hamiltonian,
    one_excitation_block,
)
from .derivations import (
    BoseHubbardParams,
    CoolingParams,
    EffectiveSpinParams,
    effective_spin_params,
    engineered_decay_rate,
)
from .spectrum import (
    EigenMode,
    ExceptionalPointError,
    SpectrumReport,
    analytic_spectrum,
    band_diagnostics,
    open_boundary_modes,
)
from .dynamics import InitialState, Trajectory, equal_time_correlator, evolve
from .one_excitation import (
    LorentzianSpectrum,
    ModeWeights,
    TwoTimeCorrelation,
    coherence_evolution,
    correlation_spectrum,
    correlator_evolution,
    mode_weights,
    two_time_correlation,
)
from .sync import GlobalSync, SyncReport, global_sync, pearson, pearson_max_delay

__all__ = [
    "ChainParams", "apply_liouvillian", "build_hamiltonian",
    "build_nonhermitian_hamiltonian", "one_excitation_block",
    "BoseHubbardParams", "CoolingParams", "EffectiveSpinParams",
    "effective_spin_params", "engineered_decay_rate",
    "EigenMode", "ExceptionalPointError", "SpectrumReport",
    "analytic_spectrum", "band_diagnostics", "open_boundary_modes",
    "InitialState", "Trajectory", "equal_time_correlator", "evolve",
    "LorentzianSpectrum", "ModeWeights", "TwoTimeCorrelation",
    "coherence_evolution", "correlation_spectrum", "correlator_evolution",
    "mode_weights", "two_time_correlation",
    "GlobalSync", "SyncReport", "global_sync", "pearson", "pearson_max_delay",
]
