from .analytic import (
    V_FERMI,
    Dispersion,
    dispersion,
    gap_scaling,
    overlap_continuum,
    saddle_closed_form,
    saddle_overlap,
    scft_energy,
    v_max,
)
from .budget import LIFETIMES, BudgetParams, budget_table, coherence_budget, critical_time, lattice_hopping, scattering_rate
from .dynamics import propagate, rydberg_quench
from .kinks import (
    KinkBasis,
    bare_kinks,
    bare_skinks,
    build_kinks,
    gauged_bare_kinks,
    k_tilde,
    kink_profile,
    overlap_series,
    sine_transform,
)
from .preparation import PinnedState, PreparationResult, SweepProtocol, adiabatic_prepare, pinned_ground_state
from .results import DensityProfile, QuenchSeries, Spectrum
from .spectra import (
    PairingReport,
    cft_densities,
    diagonalize,
    extract_kink_band,
    ground_state_densities,
    kink_basis,
    max_slope_lambda,
    susy_pairing_report,
    tail_fidelity,
    track_kink_band,
)

__all__ = [
    "V_FERMI",
    "LIFETIMES",
    "BudgetParams",
    "DensityProfile",
    "Dispersion",
    "KinkBasis",
    "PairingReport",
    "PinnedState",
    "PreparationResult",
    "QuenchSeries",
    "Spectrum",
    "SweepProtocol",
    "adiabatic_prepare",
    "bare_kinks",
    "bare_skinks",
    "budget_table",
    "build_kinks",
    "cft_densities",
    "coherence_budget",
    "critical_time",
    "diagonalize",
    "dispersion",
    "extract_kink_band",
    "gap_scaling",
    "gauged_bare_kinks",
    "ground_state_densities",
    "k_tilde",
    "kink_basis",
    "kink_profile",
    "lattice_hopping",
    "max_slope_lambda",
    "overlap_continuum",
    "overlap_series",
    "pinned_ground_state",
    "propagate",
    "rydberg_quench",
    "saddle_closed_form",
    "saddle_overlap",
    "scattering_rate",
    "scft_energy",
    "sine_transform",
    "susy_pairing_report",
    "tail_fidelity",
    "track_kink_band",
    "v_max",
]
