from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np


@dataclass
class Spectrum:
    """Ascending eigenpairs; ``vectors[:, k]`` belongs to ``energies[k]``."""

    energies: np.ndarray
    vectors: np.ndarray
    space: Any

    def __len__(self) -> int:
        return int(self.energies.size)

    def residuals(self, op) -> np.ndarray:
        hv = op.matrix @ self.vectors
        return np.linalg.norm(hv - self.vectors * self.energies[None, :], axis=0)

    def orthonormality_error(self) -> float:
        gram = self.vectors.conj().T @ self.vectors
        return float(np.abs(gram - np.eye(gram.shape[0])).max()) if gram.size else 0.0


@dataclass
class DensityProfile:
    """Per-site ⟨n_i⟩ and optionally ⟨h_i⟩; ``sites`` are 1-based."""

    sites: np.ndarray
    site_densities: np.ndarray
    energy_densities: Optional[np.ndarray] = None
    particle_number: Optional[int] = None

    def check(self, tol: float = 1e-10) -> None:
        if self.particle_number is not None:
            total = float(np.sum(self.site_densities))
            if abs(total - self.particle_number) > tol:
                raise ValueError(f"Densities sum to {total}, expected {self.particle_number}")

    def family_means(self) -> np.ndarray:
        """Mean density over the sites 3j-2, 3j-1 and 3j."""
        families = (self.sites - 1) % 3
        return np.array([np.nanmean(self.site_densities[families == f]) for f in range(3)])


@dataclass
class QuenchSeries:
    times: np.ndarray
    overlap: Optional[np.ndarray] = None
    observables: Dict[str, np.ndarray] = field(default_factory=dict)
    norms: Optional[np.ndarray] = None
    final_state: Optional[np.ndarray] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def overlap_sq(self) -> Optional[np.ndarray]:
        return None if self.overlap is None else np.abs(self.overlap) ** 2

    def check(self, norm_tol: float = 1e-9) -> None:
        sq = self.overlap_sq
        if sq is not None and (np.any(sq < -1e-14) or np.any(sq > 1 + 1e-9)):
            raise ValueError("Squared overlap left [0, 1]")
        if self.norms is not None and np.max(np.abs(self.norms - 1.0)) > norm_tol:
            raise ValueError(f"Norm drift {np.max(np.abs(self.norms - 1.0)):.3e} exceeds {norm_tol}")
