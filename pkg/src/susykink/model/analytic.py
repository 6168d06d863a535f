"""Continuum kink dispersion, group velocities and the saddle-point form of the edge-to-edge overlap."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.optimize import brentq

from ..utils import NumericalError

V_FERMI = 3.0 * math.sqrt(3.0) / 4.0

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class Dispersion:
    """E(k̃) = a √(1 − m cos²(k̃/2)) on k̃ ∈ [0, π], with s = √(8 + λ²)."""

    lam: float

    @property
    def s_aux(self) -> float:
        return math.sqrt(8.0 + self.lam**2)

    @property
    def amplitude(self) -> float:
        s, lam = self.s_aux, self.lam
        return (3 * lam + s) ** 1.5 / (2.0 * math.sqrt(2.0) * math.sqrt(lam + s))

    @property
    def modulus(self) -> float:
        s, lam = self.s_aux, self.lam
        if lam == 1.0:
            return 1.0
        return 1.0 - (s - 3 * lam) ** 3 * (lam + s) / ((s - lam) * (3 * lam + s) ** 3)

    @property
    def critical(self) -> bool:
        return self.lam == 1.0

    def _u(self, k: np.ndarray) -> np.ndarray:
        return 1.0 - self.modulus * np.cos(k / 2.0) ** 2

    def energy(self, k: ArrayLike) -> ArrayLike:
        k = np.asarray(k, dtype=float)
        if self.critical:
            out = 2.0 * V_FERMI * np.sin(k / 2.0)
        else:
            out = self.amplitude * np.sqrt(self._u(k))
        return float(out) if out.ndim == 0 else out

    def velocity(self, k: ArrayLike) -> ArrayLike:
        """Group velocity dE/dk̃."""
        k = np.asarray(k, dtype=float)
        if self.critical:
            out = V_FERMI * np.cos(k / 2.0)
        else:
            out = self.amplitude * self.modulus * np.sin(k) / (4.0 * np.sqrt(self._u(k)))
        return float(out) if out.ndim == 0 else out

    def curvature(self, k: ArrayLike) -> ArrayLike:
        """d²E/dk̃²."""
        k = np.asarray(k, dtype=float)
        if self.critical:
            out = -0.5 * V_FERMI * np.sin(k / 2.0)
        else:
            u = self._u(k)
            m = self.modulus
            out = 0.25 * self.amplitude * m * (np.cos(k) / np.sqrt(u) - m * np.sin(k) ** 2 / (4.0 * u**1.5))
        return float(out) if out.ndim == 0 else out

    @property
    def gap(self) -> float:
        """E(0) = (s − 3λ)^{3/2} / (2√2 (s − λ)^{1/2})."""
        s, lam = self.s_aux, self.lam
        return (s - 3 * lam) ** 1.5 / (2.0 * math.sqrt(2.0) * math.sqrt(s - lam))

    def k_of_max_velocity(self) -> float:
        if self.critical:
            return 0.0
        if self.lam == 0.0:
            return math.pi / 2.0
        eps = 1e-9
        return brentq(self.curvature, eps, math.pi - eps, xtol=1e-14)

    @property
    def v_max(self) -> float:
        if self.lam == 0.0:
            return 0.0
        return float(self.velocity(self.k_of_max_velocity()))

    @property
    def kink_speed(self) -> float:
        """Real-space speed in sites per unit time; kinks hop three sites at a time."""
        return 3.0 * self.v_max


def dispersion(lam: float) -> Dispersion:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    return Dispersion(float(lam))


def v_max(lam: float) -> float:
    return dispersion(lam).v_max


def _velocity_roots(disp: Dispersion, target: float) -> list:
    """k̃ ∈ (0, π) with E′(k̃) = target, on each monotone branch of E′."""
    k_star = disp.k_of_max_velocity()
    top = float(disp.velocity(k_star))
    if target > top:
        return []
    f = lambda k: float(disp.velocity(k)) - target  # noqa: E731
    roots = []
    branches = [(k_star, math.pi)] if k_star <= 0.0 else [(0.0, k_star), (k_star, math.pi)]
    for lo, hi in branches:
        if f(lo) * f(hi) > 0:
            if abs(f(lo)) < 1e-14:
                roots.append(lo)
                continue
            raise NumericalError(f"Saddle point not bracketed on ({lo:.6f}, {hi:.6f}) for velocity {target:.6f}")
        roots.append(brentq(f, lo, hi, xtol=1e-14))
    return roots


def saddle_overlap(l: int, lam: float, t: float, max_saddles: int = 2) -> complex:
    """Stationary-phase estimate of ⟨K_{l+1}|e^{-iHt}|K_1⟩ in the continuum band.

    Saddle s contributes once v_max·t/(l+2) exceeds 2s − 1; before the first arrival the
    estimate is exactly 0.
    """
    if t <= 0:
        if t < 0:
            raise ValueError(f"t must be non-negative, got {t}")
        return 0j
    if l < 1 or max_saddles < 1:
        raise ValueError(f"Need l >= 1 and max_saddles >= 1, got l={l}, max_saddles={max_saddles}")
    disp = dispersion(lam)
    vm = disp.v_max
    scale = math.pi / (l + 2)
    total = 0j
    for s in range(1, max_saddles + 1):
        if vm * t / (l + 2) < 2 * s - 1:
            break
        for k0 in _velocity_roots(disp, (2 * s - 1) * (l + 2) / t):
            phi2 = -t * scale**2 * float(disp.curvature(k0))
            if abs(phi2) < 1e-300:
                continue
            phase = (2 * s - 1) * math.pi * k0 / scale - float(disp.energy(k0)) * t + math.copysign(math.pi / 4, phi2)
            total += math.sin(k0) ** 2 * math.sqrt(2 * math.pi / abs(phi2)) * complex(math.cos(phase), math.sin(phase))
    return -2.0 / (l + 2) * total


def saddle_closed_form(l: int, t: float) -> float:
    """|o(t)| of the first saddle at λ=1: (16/√(π(l+2))) (1 − x²)^{3/4} x^{5/2}, x = (l+2)/(v_F t)."""
    if t <= 0:
        return 0.0
    x = (l + 2) / (V_FERMI * t)
    if x >= 1.0:
        return 0.0
    return 16.0 / math.sqrt(math.pi * (l + 2)) * (1 - x**2) ** 0.75 * x**2.5


def overlap_continuum(l: int, lam: float, times: Sequence[float]) -> np.ndarray:
    """Finite band sum for o(t) with the continuum energies E(πk/(l+2))."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    disp = dispersion(lam)
    k = np.pi * np.arange(1, l + 2) / (l + 2)
    weights = (2.0 / (l + 2)) * np.sin(k) * np.sin(k * (l + 1))
    return np.exp(-1j * np.outer(np.asarray(times, dtype=float), disp.energy(k))) @ weights


def scft_energy(L: int) -> float:
    if L % 3 == 1:
        return 1.0 / 3.0
    if L % 3 == 0:
        return 2.0 / 3.0
    raise ValueError(f"Gap scaling is defined for L = 0 or 1 mod 3, got L={L}")


def gap_scaling(L: int, lam: float = 1.0, W2: float = 1.0) -> float:
    """Δ_sg ≈ 2π E_SCFT · 3 v · W(2r₀)/L with v = v_max(λ) (v_F at criticality)."""
    if L < 1 or W2 <= 0:
        raise ValueError(f"Need L >= 1 and W2 > 0, got L={L}, W2={W2}")
    return 2.0 * math.pi * scft_energy(L) * 3.0 * v_max(lam) * W2 / L
