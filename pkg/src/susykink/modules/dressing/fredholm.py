"""Multi-layer dressing designed by inverting a discretized first-kind Fredholm equation.

W_tot(r) = Σ_j A_j / ((ρ_j r)⁶ + 1) is matched to a step-like target at the fit points by a
truncated-SVD pseudoinverse. Lengths are in units of the lattice spacing.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from ...utils import NumericalError
from .config import PotentialDesign, target_profile

logger = logging.getLogger(__name__)


def kernel_matrix(fit_points: np.ndarray, rhos: np.ndarray) -> np.ndarray:
    return 1.0 / (np.multiply.outer(fit_points, rhos) ** 6 + 1.0)


def fredholm_design(
    suppression: float,
    rho_grid: Optional[Sequence[float]] = None,
    fit_points: Optional[Sequence[float]] = None,
    rcond: float = 1e-12,
) -> PotentialDesign:
    """Solve for kernel amplitudes A(ρ_j).

    Args:
        suppression: target suppression factor s.
        rho_grid: inverse radii ρ_j r₀ (default: 8 values in [0.01, 2]).
        fit_points: distances r_i / r₀ (default: 1..12).
        rcond: relative singular-value cutoff of the pseudoinverse.

    Returns:
        A design with ``r0 = 1``; ``diagnostics`` holds rank, singular values, fit residual and
        the truncation estimate ‖(1 − U_r U_rᵀ) W_target‖.
    """
    if suppression <= 0:
        raise ValueError(f"Suppression factor must be positive, got {suppression}")
    rhos = np.linspace(0.01, 2.0, 8) if rho_grid is None else np.asarray(rho_grid, dtype=float)
    points = np.arange(1, 13, dtype=float) if fit_points is None else np.asarray(fit_points, dtype=float)
    if np.any(rhos <= 0):
        raise ValueError("Radii grid must be positive")
    if np.any(points <= 0) or np.unique(points).size != points.size:
        raise ValueError("Fit points must be distinct and positive")

    kernel = kernel_matrix(points, rhos)
    target = target_profile(points, suppression)
    u, sv, vt = np.linalg.svd(kernel, full_matrices=False)
    rank = int(np.sum(sv > rcond * sv[0]))
    if rank < 2:
        raise NumericalError(f"Fredholm design is rank deficient (rank {rank})", residuals=sv.tolist())

    coeff = u[:, :rank].T @ target
    amplitudes = vt[:rank].T @ (coeff / sv[:rank])
    residual = target - kernel @ amplitudes
    truncation = target - u[:, :rank] @ coeff
    logger.info(f"Fredholm design: rank {rank}/{min(kernel.shape)}, condition {sv[0] / sv[-1]:.3e}")

    return PotentialDesign(
        r0=1.0,
        kernel_amplitudes=amplitudes.tolist(),
        kernel_rhos=rhos.tolist(),
        suppression=suppression,
        diagnostics={
            "rank": rank,
            "singular_values": sv.tolist(),
            "fit_points": points.tolist(),
            "residual_norm": float(np.linalg.norm(residual)),
            "max_relative_residual": float(np.max(np.abs(residual))),
            "truncation_estimate": float(np.linalg.norm(truncation)),
        },
    )


def far_tail_ratio(design: PotentialDesign, n_far: float = 25.0) -> float:
    """W_tot(2r₀)/W_tot(n_far r₀)."""
    return float(design.at_spacing(2.0) / design.at_spacing(n_far))
