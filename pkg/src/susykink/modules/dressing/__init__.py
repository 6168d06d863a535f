from .config import (
    LATTICE_SPACING_UM,
    SECONDARY_C6,
    SECONDARY_DETUNING,
    DressingLayer,
    PotentialDesign,
    lithium_84s,
    mhz,
    target_profile,
)
from .fredholm import far_tail_ratio, fredholm_design
from .patterns import OffCriticalPatterns, lambda_slots, offcritical_patterns
from .potential import (
    TradeoffRatios,
    TwoAtomLevels,
    double_dressing,
    dressed_potential,
    match_double_dressing,
    tradeoff_ratios,
    two_atom_oracle,
)

__all__ = [
    "LATTICE_SPACING_UM",
    "SECONDARY_C6",
    "SECONDARY_DETUNING",
    "DressingLayer",
    "OffCriticalPatterns",
    "PotentialDesign",
    "TradeoffRatios",
    "TwoAtomLevels",
    "double_dressing",
    "dressed_potential",
    "far_tail_ratio",
    "fredholm_design",
    "lambda_slots",
    "lithium_84s",
    "match_double_dressing",
    "mhz",
    "offcritical_patterns",
    "target_profile",
    "tradeoff_ratios",
    "two_atom_oracle",
]
