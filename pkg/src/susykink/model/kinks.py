"""Localized kinks and skinks built from the lowest band of the L=3l+1 chain."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

import numpy as np

from ..modules.hilbert import HilbertSpace
from ..modules.operators import LinearOperator, Staggering, build_hq, build_local_energies, build_supercharge
from ..utils import NumericalError
from .results import DensityProfile, QuenchSeries


def sine_transform(l: int) -> np.ndarray:
    """S_kj = √(2/(l+2)) sin(πkj/(l+2)) for k, j = 1..l+1; symmetric and orthogonal."""
    idx = np.arange(1, l + 2)
    return np.sqrt(2.0 / (l + 2)) * np.sin(np.pi * np.outer(idx, idx) / (l + 2))


def k_tilde(l: int) -> np.ndarray:
    return np.pi * np.arange(1, l + 2) / (l + 2)


def bare_kink_sites(l: int, j: int) -> list:
    """Occupied-site patterns of the bare kink with its empty site at 3j-2 (1-based sites)."""
    if not 1 <= j <= l + 1:
        raise ValueError(f"Kink index must lie in 1..{l + 1}, got {j}")
    right = [3 * m for m in range(j, l + 1)]
    configs = []
    for choice in product((0, 1), repeat=j - 1):
        left = [3 * m - 2 + c for m, c in zip(range(1, j), choice)]
        configs.append(left + right)
    return configs


def bare_kinks(space: HilbertSpace, l: int) -> np.ndarray:
    """Columns |I…I 0 II…II⟩ at extreme staggering, ungauged, with positive amplitudes."""
    if space.L != 3 * l + 1 or space.n != l:
        raise ValueError(f"Bare kinks live in the n={l} sector of L={3 * l + 1}")
    out = np.zeros((space.dim, l + 1))
    for j in range(1, l + 2):
        configs = bare_kink_sites(l, j)
        bits = np.array([sum(1 << (s - 1) for s in sites) for sites in configs], dtype=np.int64)
        idx = space.index_of(bits)
        if np.any(idx < 0):
            raise ValueError("Bare kink configuration missing from the space (is it constrained?)")
        out[idx, j - 1] = 1.0 / np.sqrt(len(configs))
    return out


def gauged_bare_kinks(space: HilbertSpace, l: int) -> np.ndarray:
    """Bare kinks with relative signs making the effective kink hopping negative."""
    bare = bare_kinks(space, l)
    # the kink-kink matrix element is linear in λ, so λ=1 fixes the sign for every λ > 0
    h = build_hq(space, Staggering.kink_chain(l, 1.0))
    hb = h @ bare
    gauge = np.ones(l + 1)
    for j in range(l):
        element = float(bare[:, j] @ hb[:, j + 1])
        if abs(element) < 1e-12:
            raise NumericalError(f"Bare kinks {j + 1} and {j + 2} are not coupled")
        gauge[j + 1] = -gauge[j] * np.sign(element)
    return bare * gauge[None, :]


def bare_skinks(space: HilbertSpace, l: int) -> np.ndarray:
    """Q|bareK_j⟩ at λ=0, each of unit norm."""
    q = build_supercharge(space, Staggering.kink_chain(l, 0.0))
    skinks = q @ gauged_bare_kinks(space, l)
    norms = np.linalg.norm(skinks, axis=0)
    return skinks / norms[None, :]


@dataclass
class KinkBasis:
    """Kink band of H_Q on L=3l+1 with its localized kinks and their superpartners."""

    l: int
    lam: float
    stagger: Staggering
    space: HilbertSpace
    energies: np.ndarray
    band: np.ndarray
    kinks: np.ndarray
    supercharge: Optional[LinearOperator] = None
    skink_space: Optional[HilbertSpace] = None
    skink_band: Optional[np.ndarray] = None
    skinks: Optional[np.ndarray] = None
    separated: bool = True
    gap_to_rest: float = float("nan")
    band_indices: Optional[np.ndarray] = None

    @property
    def k_tilde(self) -> np.ndarray:
        return k_tilde(self.l)

    def kink(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.l + 1:
            raise ValueError(f"Kink index must lie in 1..{self.l + 1}, got {j}")
        return self.kinks[:, j - 1]

    def skink(self, j: int) -> np.ndarray:
        if self.skinks is None:
            raise ValueError("Kink basis was built without skinks")
        if not 1 <= j <= self.l + 1:
            raise ValueError(f"Skink index must lie in 1..{self.l + 1}, got {j}")
        return self.skinks[:, j - 1]

    def superpartner(self, j: int) -> np.ndarray:
        """Q|K_j⟩ normalized."""
        if self.supercharge is None:
            raise ValueError("Kink basis was built without a supercharge")
        vec = self.supercharge @ self.kink(j)
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            raise NumericalError(f"Kink {j} is annihilated by Q")
        return vec / norm


def build_kinks(
    energies: np.ndarray,
    band: np.ndarray,
    l: int,
    lam: float,
    space: HilbertSpace,
    stagger: Optional[Staggering] = None,
    with_skinks: bool = True,
) -> KinkBasis:
    """Sine-transform a phase-fixed band into localized kinks, and Q-map it into skinks."""
    energies = np.asarray(energies, dtype=float)
    if band.ndim != 2 or band.shape[1] != l + 1 or energies.size != l + 1:
        raise ValueError(f"Kink band must hold l+1={l + 1} states, got {band.shape[-1]} vectors and {energies.size} energies")
    if band.shape[0] != space.dim:
        raise ValueError(f"Band vectors have length {band.shape[0]}, space has dimension {space.dim}")
    stagger = stagger or Staggering.kink_chain(l, lam)
    transform = sine_transform(l)
    basis = KinkBasis(l=l, lam=lam, stagger=stagger, space=space, energies=energies, band=band, kinks=band @ transform)
    if not with_skinks:
        return basis

    q = build_supercharge(space, stagger)
    images = q @ band
    norms = np.linalg.norm(images, axis=0)
    if np.any(norms < 1e-10):
        raise NumericalError(
            f"Band states {np.flatnonzero(norms < 1e-10) + 1} have no superpartner in n={l + 1}", residuals=norms.tolist()
        )
    basis.supercharge = q
    basis.skink_space = q.codomain
    basis.skink_band = images / norms[None, :]
    basis.skinks = basis.skink_band @ transform
    return basis


def overlap_series(basis: KinkBasis, times: Sequence[float]) -> QuenchSeries:
    """o(t) = ⟨K_{l+1}|e^{-iHt}|K_1⟩ from the band energies alone."""
    times = np.asarray(times, dtype=float)
    transform = sine_transform(basis.l)
    weights = transform[:, 0] * transform[:, -1]
    overlap = np.exp(-1j * np.outer(times, basis.energies)) @ weights
    return QuenchSeries(times=times, overlap=overlap, metadata={"l": basis.l, "lambda": basis.lam, "source": "band"})


def kink_profile(basis: KinkBasis, j: int, skink: bool = False) -> DensityProfile:
    """Site and local-energy densities of |K_j⟩ (or |K̄_j⟩)."""
    if skink:
        psi, space = basis.skink(j), basis.skink_space
    else:
        psi, space = basis.kink(j), basis.space
    densities = (np.abs(psi) ** 2) @ space.occupations()
    energy = np.array([op.expectation(psi) for op in build_local_energies(space, basis.stagger)])
    profile = DensityProfile(
        sites=np.arange(1, space.L + 1), site_densities=densities, energy_densities=energy, particle_number=space.n
    )
    profile.check(1e-9)
    return profile
