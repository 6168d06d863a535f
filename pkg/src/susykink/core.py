from __future__ import annotations

import logging
from typing import Dict, Literal, Optional, Sequence, Tuple

import numpy as np

from .model import (
    V_FERMI,
    DensityProfile,
    KinkBasis,
    QuenchSeries,
    Spectrum,
    SweepProtocol,
    diagonalize,
    extract_kink_band,
    kink_profile,
    overlap_series,
    pinned_ground_state,
    propagate,
    v_max,
)
from .modules.hilbert import HilbertSpace, enumerate_space
from .modules.operators import LinearOperator, Staggering, build_hq, build_observable, fit_observable_coeffs
from .utils import DimensionLimitError

logger = logging.getLogger(__name__)

InitialState = Literal["exact-kink", "pinned-kink", "exact-skink", "pinned-skink"]


class KinkSimulator:
    def __init__(self, l: int, lam: float, band_window: Optional[int] = None):
        """Exact kink physics on the open L=3l+1 chain with pattern 11λ.

        Spaces, Hamiltonians and spectra are built lazily and cached, so one instance serves
        every quantity of a single (l, λ) point.

        Args:
            l: number of particles in the kink sector (chain length 3l+1).
            lam: staggering λ in [0, 1].
            band_window: lowest eigenpairs searched for the kink band, which crosses other
                levels as λ grows; also the Lanczos count when the sector is too large for
                dense diagonalization. Defaults to 3(l+1).
        """
        if l < 1:
            raise ValueError(f"l must be >= 1, got {l}")
        self.l = l
        self.lam = float(lam)
        self.stagger = Staggering.kink_chain(l, lam)
        self.band_window = band_window or 3 * (l + 1)
        self._spaces: Dict[int, HilbertSpace] = {}
        self._hamiltonians: Dict[int, LinearOperator] = {}
        self._spectra: Dict[int, Spectrum] = {}
        self._basis: Optional[KinkBasis] = None

    @property
    def L(self) -> int:
        return self.stagger.L

    @property
    def velocity(self) -> float:
        """v_max(λ), or v_F at criticality; used for the t·v/l axis."""
        return V_FERMI if self.lam == 1.0 else v_max(self.lam)

    def space(self, n: Optional[int] = None) -> HilbertSpace:
        n = self.l if n is None else n
        if n not in self._spaces:
            self._spaces[n] = enumerate_space(self.L, n)
        return self._spaces[n]

    def hamiltonian(self, n: Optional[int] = None) -> LinearOperator:
        n = self.l if n is None else n
        if n not in self._hamiltonians:
            self._hamiltonians[n] = build_hq(self.space(n), self.stagger)
        return self._hamiltonians[n]

    def spectrum(self, n: Optional[int] = None) -> Spectrum:
        n = self.l if n is None else n
        if n not in self._spectra:
            h = self.hamiltonian(n)
            try:
                self._spectra[n] = diagonalize(h, "all")
            except DimensionLimitError:
                logger.info(f"Sector n={n} too large for dense diagonalization, using Lanczos")
                self._spectra[n] = diagonalize(h, self.band_window)
        return self._spectra[n]

    @property
    def basis(self) -> KinkBasis:
        if self._basis is None:
            self._basis = extract_kink_band(self.spectrum(self.l), self.l, self.lam, window=self.band_window)
        return self._basis

    # ------------------------------------------------------------------ #
    # Observables
    # ------------------------------------------------------------------ #
    def observable_coeffs(self, kind: str) -> Tuple[float, float]:
        return fit_observable_coeffs(kind, self.basis)

    def profile(self, j: int = 1, skink: bool = False) -> DensityProfile:
        return kink_profile(self.basis, j, skink=skink)

    def initial_state(self, init: InitialState, protocol: Optional[SweepProtocol] = None) -> Tuple[np.ndarray, int]:
        """State vector and its particle sector for a named quench initial state."""
        if init == "exact-kink":
            return self.basis.kink(1), self.l
        if init == "exact-skink":
            return self.basis.skink(1), self.l + 1
        if init == "pinned-kink":
            return pinned_ground_state(self.l, self.lam, "kink", 1, protocol, self.basis).vector, self.l
        if init == "pinned-skink":
            return pinned_ground_state(self.l, self.lam, "skink", 1, protocol, self.basis).vector, self.l + 1
        raise ValueError(f"Unknown initial state: {init}")

    # ------------------------------------------------------------------ #
    # Dynamics
    # ------------------------------------------------------------------ #
    def overlap(self, times: Sequence[float]) -> QuenchSeries:
        """Closed-form ⟨K_{l+1}|e^{-iHt}|K_1⟩ from the band energies."""
        return overlap_series(self.basis, times)

    def quench(
        self,
        times: Sequence[float],
        init: InitialState = "exact-kink",
        kind: str = "dn",
        method: str = "eigen",
        dt: Optional[float] = None,
    ) -> QuenchSeries:
        """Propagate an initial (s)kink and record the overlap with the rightmost (s)kink and a detector."""
        state, n = self.initial_state(init)
        skink = init.endswith("skink")
        if skink and kind != "dnbar":
            kind = "dnbar"
        space = self.space(n)
        detector = build_observable(kind, space, self.observable_coeffs(kind))
        reference = self.basis.skink(self.l + 1) if skink else self.basis.kink(self.l + 1)
        spectrum = self.spectrum(n) if method == "eigen" else None
        series = propagate(
            state,
            self.hamiltonian(n),
            times,
            method=method,
            observables={kind: detector},
            reference=reference,
            dt=dt,
            spectrum=spectrum,
        )
        series.metadata.update({"init": init, "l": self.l, "lambda": self.lam, "observable": kind})
        return series
