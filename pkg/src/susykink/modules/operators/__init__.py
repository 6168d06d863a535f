from .config import RydbergParams, Staggering
from .dressed import build_hq_dressed
from .linear import DENSE_THRESHOLD, LinearOperator
from .observables import EXTREME_COEFFS, build_observable, edge_occupation, fit_observable_coeffs
from .rydberg import build_rydberg, interaction_matrix, neighbour_ground_pairs, rydberg_population
from .supercharge import (
    build_hq,
    build_local_energies,
    build_local_energy,
    build_site_supercharge,
    build_supercharge,
    neighbour_sector,
    number_operator,
)

__all__ = [
    "DENSE_THRESHOLD",
    "EXTREME_COEFFS",
    "LinearOperator",
    "RydbergParams",
    "Staggering",
    "build_hq",
    "build_hq_dressed",
    "build_local_energies",
    "build_local_energy",
    "build_observable",
    "build_rydberg",
    "build_site_supercharge",
    "build_supercharge",
    "edge_occupation",
    "fit_observable_coeffs",
    "interaction_matrix",
    "neighbour_ground_pairs",
    "neighbour_sector",
    "number_operator",
    "rydberg_population",
]
