from __future__ import annotations

import logging
import math
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
LATTICE_SPACING_UM = 2.5


def mhz(value: float) -> float:
    """Angular frequency (rad/s) for a value quoted in MHz."""
    return TWO_PI * value * 1e6


class DressingLayer(BaseModel):
    """One off-resonant dressing laser.

    Units: ``Omega`` and ``Delta`` are angular frequencies (2π × quoted Hz), ``C6`` is used as
    tabulated in Hz·μm⁶ without a 2π factor, lengths are in μm. Potentials then come out in Hz.
    """

    Omega: float
    Delta: float
    C6: float
    site_rabi_pattern: List[float] = Field(default_factory=lambda: [1.0])

    @model_validator(mode="after")
    def _check(self) -> "DressingLayer":
        if self.Delta == 0.0:
            raise ValueError("Detuning must be nonzero")
        if not self.site_rabi_pattern:
            raise ValueError("site_rabi_pattern must hold at least one multiplier")
        if not self.perturbative:
            logger.warning(f"Dressing layer outside the perturbative regime: |Omega/Delta| = {self.ratio:.3f}")
        return self

    @property
    def ratio(self) -> float:
        return abs(self.Omega / self.Delta)

    @property
    def perturbative(self) -> bool:
        return self.ratio < 1.0

    @property
    def amplitude(self) -> float:
        """Plateau height W(0) − W(∞) = 2Ω⁴/Δ³."""
        return 2.0 * self.Omega**4 / self.Delta**3

    @property
    def rho(self) -> float:
        """Inverse dressing radius (2Δ/C₆)^(1/6)."""
        ratio = 2.0 * self.Delta / self.C6
        if ratio <= 0:
            raise ValueError("Delta and C6 of opposite sign have a resonance, no dressing radius")
        return ratio ** (1.0 / 6.0)

    def multiplier(self, site: int) -> float:
        """Rabi multiplier of 1-based ``site``."""
        return self.site_rabi_pattern[(site - 1) % len(self.site_rabi_pattern)]

    def vdw(self, r: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        return self.C6 / np.asarray(r, dtype=float) ** 6

    def potential(
        self, r: Union[float, np.ndarray], m_i: float = 1.0, m_j: float = 1.0
    ) -> Union[float, np.ndarray]:
        """W(r) = 2(Ω_iΩ_j)²V/(Δ³(2Δ+V)) with Ω_i = m_i Ω."""
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise ValueError("Distances must be positive")
        v = self.vdw(r)
        om2 = (m_i * self.Omega) * (m_j * self.Omega)
        out = 2.0 * om2**2 * v / (self.Delta**3 * (2.0 * self.Delta + v))
        return float(out) if out.ndim == 0 else out


class PotentialDesign(BaseModel):
    """Flat-top potentials summed over dressing layers and, for Fredholm designs, bare kernels A/((ρr)⁶+1)."""

    layers: List[DressingLayer] = Field(default_factory=list)
    r0: float = LATTICE_SPACING_UM
    kernel_amplitudes: List[float] = Field(default_factory=list)
    kernel_rhos: List[float] = Field(default_factory=list)
    suppression: Optional[float] = None
    diagnostics: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check(self) -> "PotentialDesign":
        if self.r0 <= 0:
            raise ValueError(f"r0 must be positive, got {self.r0}")
        if len(self.kernel_amplitudes) != len(self.kernel_rhos):
            raise ValueError("kernel_amplitudes and kernel_rhos must have equal length")
        return self

    def layer_potentials(self, r: Union[float, np.ndarray], m_i: float = 1.0, m_j: float = 1.0) -> List[np.ndarray]:
        return [np.asarray(layer.potential(r, m_i, m_j)) for layer in self.layers]

    def total(self, r: Union[float, np.ndarray], m_i: float = 1.0, m_j: float = 1.0) -> Union[float, np.ndarray]:
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for w in self.layer_potentials(r, m_i, m_j):
            out = out + w
        if self.kernel_amplitudes:
            amps = np.asarray(self.kernel_amplitudes)
            rhos = np.asarray(self.kernel_rhos)
            out = out + (amps / ((np.multiply.outer(r, rhos)) ** 6 + 1.0)).sum(axis=-1)
        return float(out) if out.ndim == 0 else out

    def at_spacing(self, n: Union[int, np.ndarray], m_i: float = 1.0, m_j: float = 1.0):
        return self.total(np.asarray(n, dtype=float) * self.r0, m_i, m_j)

    def site_multiplier(self, site: int) -> float:
        return self.layers[0].multiplier(site) if self.layers else 1.0


def target_profile(n: Union[int, np.ndarray], suppression: float) -> np.ndarray:
    """Step-like target W_target(n r₀)/W_target(2r₀): s, 1, 1/s, then (1/s)(3/n)⁶."""
    n = np.asarray(n, dtype=float)
    out = np.where(n <= 1, suppression, 0.0)
    out = np.where(n == 2, 1.0, out)
    out = np.where(n >= 3, (1.0 / suppression) * (3.0 / np.maximum(n, 3.0)) ** 6, out)
    return out


def lithium_84s(pattern: Optional[List[float]] = None) -> DressingLayer:
    """Primary |84S⟩ dressing: Ω = 2π×10 MHz, Δ = 10Ω, C₆ = 645 GHz·μm⁶."""
    return DressingLayer(
        Omega=mhz(10.0), Delta=mhz(100.0), C6=645e9, site_rabi_pattern=pattern or [1.0]
    )


SECONDARY_DETUNING = -5e8
SECONDARY_C6 = {"74D": -6005e9, "84D": -24200e9}
