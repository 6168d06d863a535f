from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DressingLayer, PotentialDesign


def dressed_potential(layer: DressingLayer, r, m_i: float = 1.0, m_j: float = 1.0):
    """Effective ground-state pair potential of a single dressing layer."""
    return layer.potential(r, m_i, m_j)


@dataclass
class TwoAtomLevels:
    """Dressed |gg⟩ level of two atoms: full 4×4 eigenvalue versus the eliminated closed form.

    The ``*_shift`` fields subtract the r → ∞ value so they compare directly with W(r).
    """

    exact: float
    closed_form: float
    exact_shift: float
    closed_form_shift: float
    perturbative: float


def _two_atom_matrix(omega_i: float, omega_j: float, delta: float, v: float) -> np.ndarray:
    # basis gg, gr, rg, rr
    return np.array(
        [
            [0.0, omega_j, omega_i, 0.0],
            [omega_j, delta, 0.0, omega_i],
            [omega_i, 0.0, delta, omega_j],
            [0.0, omega_i, omega_j, 2.0 * delta + v],
        ]
    )


def _dressed_ground_level(omega_i: float, omega_j: float, delta: float, v: float) -> float:
    energies, vectors = np.linalg.eigh(_two_atom_matrix(omega_i, omega_j, delta, v))
    return float(energies[np.argmax(np.abs(vectors[0]) ** 2)])


def _eliminated_level(omega_i: float, omega_j: float, delta: float, v: float) -> float:
    return -2.0 * omega_i * omega_j * (2.0 * delta + v) / (delta * (2.0 * delta + v) - 2.0 * omega_i * omega_j)


def two_atom_oracle(layer: DressingLayer, r: float, m_i: float = 1.0, m_j: float = 1.0) -> TwoAtomLevels:
    if r <= 0:
        raise ValueError(f"Distance must be positive, got {r}")
    om_i, om_j = m_i * layer.Omega, m_j * layer.Omega
    v = float(layer.vdw(r))
    exact = _dressed_ground_level(om_i, om_j, layer.Delta, v)
    closed = _eliminated_level(om_i, om_j, layer.Delta, v)
    return TwoAtomLevels(
        exact=exact,
        closed_form=closed,
        exact_shift=exact - _dressed_ground_level(om_i, om_j, layer.Delta, 0.0),
        closed_form_shift=closed - _eliminated_level(om_i, om_j, layer.Delta, 0.0),
        perturbative=float(layer.potential(r, m_i, m_j)),
    )


def match_double_dressing(primary: DressingLayer, secondary_Delta: float, secondary_C6: float) -> DressingLayer:
    """Secondary layer whose r⁻⁶ tail cancels the primary one: Ω′ = Ω|Δ′/Δ||C₆/C₆′|^(1/4)."""
    if secondary_C6 >= 0:
        raise ValueError(f"Secondary C6 must be negative (attractive), got {secondary_C6}")
    if secondary_Delta >= 0:
        raise ValueError(f"Secondary detuning must be negative, got {secondary_Delta}")
    if primary.Delta <= 0 or primary.C6 <= 0:
        raise ValueError("Primary layer must be repulsive with positive detuning")
    omega = primary.Omega * abs(secondary_Delta / primary.Delta) * abs(primary.C6 / secondary_C6) ** 0.25
    return DressingLayer(
        Omega=omega, Delta=secondary_Delta, C6=secondary_C6, site_rabi_pattern=list(primary.site_rabi_pattern)
    )


def double_dressing(primary: DressingLayer, secondary_Delta: float, secondary_C6: float, r0: float) -> PotentialDesign:
    return PotentialDesign(layers=[primary, match_double_dressing(primary, secondary_Delta, secondary_C6)], r0=r0)


@dataclass
class TradeoffRatios:
    scatter_ratio: float
    tail_ratio: float
    scatter_per_hop: float
    w2: float


def tradeoff_ratios(
    layer: DressingLayer,
    gamma0: float,
    r0: float,
    w2: Optional[float] = None,
    rate_unit: float = 1e6,
) -> TradeoffRatios:
    """Scattering versus tail errors accumulated over one hopping time.

    ``scatter_ratio`` = Δγ₀/(w₂Ω²) with Ω, Δ in units of ``rate_unit`` and γ₀ in s⁻¹, where
    W(2r₀) = w₂Ω⁴/Δ³. ``scatter_per_hop`` = γ₀(Ω/Δ)²/W(2r₀) is the unit-free version.
    """
    if gamma0 < 0 or r0 <= 0:
        raise ValueError("gamma0 must be non-negative and r0 positive")
    w2_value = float(layer.potential(2 * r0))
    if w2 is None:
        w2 = w2_value * layer.Delta**3 / layer.Omega**4
    omega = layer.Omega / rate_unit
    delta = layer.Delta / rate_unit
    return TradeoffRatios(
        scatter_ratio=abs(delta) * gamma0 / (w2 * omega**2),
        tail_ratio=float(layer.potential(3 * r0)) / w2_value,
        scatter_per_hop=gamma0 * (layer.Omega / layer.Delta) ** 2 / w2_value,
        w2=w2,
    )
