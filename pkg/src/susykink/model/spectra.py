"""Exact diagonalization, SUSY pairing diagnostics and ground-state density profiles."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from ..modules.dressing import PotentialDesign
from ..modules.hilbert import HilbertSpace, enumerate_space
from ..modules.operators import (
    DENSE_THRESHOLD,
    LinearOperator,
    Staggering,
    build_hq,
    build_hq_dressed,
    build_local_energies,
    build_supercharge,
)
from ..utils import DimensionLimitError, NumericalError
from .kinks import KinkBasis, build_kinks, gauged_bare_kinks, sine_transform
from .results import DensityProfile, Spectrum

logger = logging.getLogger(__name__)

# band spread below which the kink band counts as degenerate
FLAT_BAND_TOL = 1e-9
# λ steps used to follow the kink band from the bare-kink manifold
BAND_TRACK_STEPS = 32
MIN_TRACK_STEP = 1e-6
CFT_AMPLITUDE = 0.77


def diagonalize(op: LinearOperator, count: Union[str, int] = "all", tol: float = 1e-10) -> Spectrum:
    """Lowest eigenpairs of a Hermitian operator.

    Dense LAPACK below ``DENSE_THRESHOLD``; implicitly restarted Lanczos (ARPACK) above, which
    requires a finite ``count``.
    """
    if not op.is_hermitian(1e-10):
        raise ValueError("diagonalize needs a Hermitian operator")
    dim = op.shape[0]
    space = op.domain
    if count != "all" and (not isinstance(count, (int, np.integer)) or count < 1):
        raise ValueError(f"count must be 'all' or a positive integer, got {count!r}")
    k = dim if count == "all" else min(int(count), dim)
    if dim == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0)), space)

    if dim <= DENSE_THRESHOLD:
        dense = op.to_dense()
        if np.isrealobj(dense) or not np.abs(dense.imag).max() > 0:
            dense = np.real(dense)
        energies, vectors = sla.eigh(dense, subset_by_index=(0, k - 1))
        return Spectrum(energies, vectors, space)

    if count == "all":
        raise DimensionLimitError(f"Full diagonalization of dimension {dim} exceeds the dense limit {DENSE_THRESHOLD}")
    try:
        energies, vectors = spla.eigsh(op.matrix, k=k, which="SA", tol=tol)
    except spla.ArpackNoConvergence as exc:
        partial = Spectrum(exc.eigenvalues, exc.eigenvectors, space)
        res = partial.residuals(op).tolist() if len(partial) else []
        raise NumericalError(f"Lanczos did not converge for dimension {dim}, k={k}", residuals=res) from exc
    order = np.argsort(energies)
    spectrum = Spectrum(energies[order], vectors[:, order], space)
    res = spectrum.residuals(op)
    scale = max(1.0, op.norm_bound())
    if np.any(res > 1e-9 * scale):
        raise NumericalError(f"Lanczos residuals above tolerance (max {res.max():.3e})", residuals=res.tolist())
    return spectrum


def _fix_band_phases(band: np.ndarray, bare: np.ndarray, l: int) -> np.ndarray:
    # sign of Σ_j sin(k̃j)⟨bareK_j|v_k⟩ is made positive
    overlaps = bare.conj().T @ band  # (j, k)
    sines = sine_transform(l) * np.sqrt((l + 2) / 2.0)  # sin(k̃ j)
    weights = np.real(np.einsum("jk,jk->k", sines, overlaps))
    signs = np.where(weights < 0, -1.0, 1.0)
    small = np.abs(weights) < 1e-12
    if np.any(small):
        logger.warning(f"Phase reference vanishes for band states {np.flatnonzero(small) + 1}; sign left as computed")
    return band * signs[None, :]


def track_kink_band(l: int, lam: float, window: Optional[int] = None, steps: int = BAND_TRACK_STEPS) -> np.ndarray:
    """Eigen-indices of the kink band of H_Q on L=3l+1 at staggering λ.

    The band is degenerate at λ=0 and spanned by the bare kinks. Other levels of the sector cross
    it without avoided crossings on the way to λ=1, so it is not the l+1 lowest states in general.
    The band is followed in λ: at every step the l+1 eigenvectors among the ``window`` lowest with
    the largest weight in the previous band subspace are kept, and the step is halved whenever that
    choice is ambiguous.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    size = l + 1
    if lam == 0.0:
        return np.arange(size)
    space = enumerate_space(3 * l + 1, l)
    window = min(space.dim, window or 3 * size)
    if window < size:
        raise ValueError(f"Tracking window {window} is smaller than the kink band ({size})")

    previous = gauged_bare_kinks(space, l)
    chosen = np.arange(size)
    done = 0.0
    pending = list(np.linspace(0.0, lam, steps + 1)[1:])
    while pending:
        target = pending[0]
        spec = diagonalize(build_hq(space, Staggering.kink_chain(l, target)), window)
        weights = np.sum(np.abs(previous.conj().T @ spec.vectors) ** 2, axis=0)
        order = np.argsort(weights)[::-1]
        kept, dropped = weights[order[:size]], weights[order[size:]]
        if kept.min() < 0.5 or (dropped.size and dropped.max() > 0.5):
            if target - done < MIN_TRACK_STEP:
                raise NumericalError(
                    f"Kink band lost at lambda={target:.6f}; enlarge the tracking window ({window})",
                    residuals=weights.tolist(),
                )
            pending.insert(0, 0.5 * (done + target))
            continue
        chosen = np.sort(order[:size])
        previous = spec.vectors[:, chosen]
        done = pending.pop(0)
    logger.debug(f"Kink band of l={l} at lambda={lam}: eigen-indices {chosen.tolist()}")
    return chosen


def extract_kink_band(
    spec: Spectrum, l: int, lam: float, with_skinks: bool = True, window: Optional[int] = None
) -> KinkBasis:
    """Kink band of H_Q on L=3l+1 (pattern 11λ, sector n=l), picked out of ``spec`` by continuity in λ."""
    space = spec.space
    if not isinstance(space, HilbertSpace) or space.L != 3 * l + 1 or space.n != l:
        raise ValueError(f"Kink band needs the n={l} sector of L={3 * l + 1}")
    if len(spec) < l + 1:
        raise ValueError(f"Spectrum holds {len(spec)} states, the kink band needs {l + 1}")
    window = window or 3 * (l + 1)
    indices = track_kink_band(l, lam, window=window)
    if indices.max() >= len(spec):
        raise ValueError(f"Kink band reaches eigen-index {indices.max()}, the spectrum holds {len(spec)} states")
    stagger = Staggering.kink_chain(l, lam)
    energies = spec.energies[indices].copy()
    band = spec.vectors[:, indices].copy()

    separated = True
    gap = float("nan")
    rest = np.delete(spec.energies[:window], indices)
    if rest.size:
        gap = float(np.abs(energies[:, None] - rest[None, :]).min())
        if gap < 1e-8:
            separated = False
            logger.warning(f"Kink band is degenerate with another level of the sector (gap {gap:.3e})")

    bare = gauged_bare_kinks(space, l)
    if energies[-1] - energies[0] < FLAT_BAND_TOL:
        # degenerate band: any rotation is an eigenbasis, take the one built from bare kinks
        band = bare @ sine_transform(l).T
    else:
        band = _fix_band_phases(band, bare, l)
    basis = build_kinks(energies, band, l, lam, space, stagger, with_skinks=with_skinks)
    basis.separated = separated
    basis.gap_to_rest = gap
    basis.band_indices = indices
    return basis


def kink_basis(l: int, lam: float, window: Optional[int] = None, with_skinks: bool = True) -> KinkBasis:
    """Diagonalize the kink chain at λ and return its kink band."""
    stagger = Staggering.kink_chain(l, lam)
    space = enumerate_space(stagger.L, l)
    window = window or 3 * (l + 1)
    spec = diagonalize(build_hq(space, stagger), min(window, space.dim))
    return extract_kink_band(spec, l, lam, with_skinks=with_skinks, window=window)


def ground_state_densities(l: int, lam: float, with_energies: bool = True) -> DensityProfile:
    """⟨n_i⟩ (and ⟨h_i⟩) in the unique ground state of the open L=3l chain with pattern 1λ1."""
    stagger = Staggering.ground_chain(l, lam)
    space = enumerate_space(stagger.L, l)
    h = build_hq(space, stagger)
    spec = diagonalize(h, 2)
    if len(spec) > 1 and spec.energies[1] - spec.energies[0] < 1e-9:
        raise NumericalError(
            f"Ground state is degenerate (E0={spec.energies[0]:.3e}, E1={spec.energies[1]:.3e})",
            residuals=spec.residuals(h).tolist(),
        )
    psi = spec.vectors[:, 0]
    weights = np.abs(psi) ** 2
    densities = weights @ space.occupations()
    energy_densities = None
    if with_energies:
        energy_densities = np.array([op.expectation(psi) for op in build_local_energies(space, stagger)])
    profile = DensityProfile(
        sites=np.arange(1, space.L + 1),
        site_densities=densities,
        energy_densities=energy_densities,
        particle_number=l,
    )
    profile.check()
    return profile


def _scaling_functions(x: np.ndarray, lp: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    prefactor = (np.pi / (2.0 * lp)) ** (1.0 / 3.0)
    s = lambda y: prefactor * np.sin(np.pi * y / (3.0 * lp))  # noqa: E731
    c = lambda y: prefactor * np.cos(np.pi * y / (3.0 * lp))  # noqa: E731
    envelope = np.sin(np.pi * x / lp) ** (1.0 / 3.0)
    return s(x), c(x - lp / 2.0), s(x - lp), envelope


def cft_densities(L: int, A: float = CFT_AMPLITUDE, x_offset: int = 0) -> DensityProfile:
    """Continuum prediction of the three site-family densities for an open L=3l chain.

    Site i sits at x = i + ``x_offset`` and L′ = L + 3, so by default site 1 is left undefined.
    ``x_offset=1`` makes the profile symmetric under reflection of the chain like the exact
    ground state. Sites with x < 2 are reported as NaN.
    """
    if L <= 0 or L % 3 != 0:
        raise ValueError(f"CFT densities need L to be a positive multiple of 3, got {L}")
    lp = float(L + 3)
    sites = np.arange(1, L + 1)
    x = (sites + x_offset).astype(float)
    s_left, c_mid, s_right, envelope = _scaling_functions(x, lp)
    family = (sites - 1) % 3
    amp = 2.0 * A / 3.0
    with np.errstate(divide="ignore", invalid="ignore"):
        dens = np.select(
            [family == 0, family == 1, family == 2],
            [1.0 / 3.0 - amp * s_left / envelope, 1.0 / 3.0 + amp * c_mid / envelope, 1.0 / 3.0 + amp * s_right / envelope],
        )
    dens = np.where(x < 2, np.nan, dens)
    return DensityProfile(sites=sites, site_densities=dens)


@dataclass
class PairingReport:
    """Spectra of every particle-number sector and their supersymmetric pairing.

    ``doublets[(n, n+1)]`` are the squared singular values of Q between the two sectors;
    ``unmatched[n]`` lists nonzero levels of sector n with no partner in n±1.
    """

    L: int
    spectra: Dict[int, np.ndarray] = field(default_factory=dict)
    doublets: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)
    zero_modes: Dict[int, int] = field(default_factory=dict)
    unmatched: Dict[int, np.ndarray] = field(default_factory=dict)
    nilpotency: float = 0.0

    @property
    def witten_count(self) -> int:
        return int(sum(self.zero_modes.values()))

    @property
    def paired(self) -> bool:
        return all(v.size == 0 for v in self.unmatched.values())

    def matched_in(self, levels: Sequence[float], n: int, tol: float = 1e-9) -> np.ndarray:
        """Mask of ``levels`` that occur in the spectrum of sector n."""
        ref = self.spectra.get(n, np.zeros(0))
        levels = np.asarray(levels, dtype=float)
        if ref.size == 0:
            return np.zeros(levels.size, dtype=bool)
        return np.array([np.min(np.abs(ref - e)) <= tol * max(1.0, abs(e)) for e in levels])


def susy_pairing_report(
    L: int,
    stagger: Staggering,
    boundary: str = "open",
    sectors: Optional[Sequence[int]] = None,
    tol: float = 1e-9,
) -> PairingReport:
    """Full spectra of H_Q per sector, zero modes and cross-sector pairing of nonzero levels."""
    if stagger.L != L:
        raise ValueError(f"Staggering is defined for L={stagger.L}, got L={L}")
    max_n = (L + 1) // 2 if boundary == "open" else L // 2
    wanted = list(range(0, max_n + 1)) if sectors is None else sorted(set(sectors))
    spaces = {n: enumerate_space(L, n, boundary) for n in range(0, max_n + 2)}
    report = PairingReport(L=L)

    for n in wanted:
        space = spaces.get(n)
        if space is None or space.dim == 0:
            continue
        energies = np.linalg.eigvalsh(build_hq(space, stagger).to_dense())
        report.spectra[n] = energies
        report.zero_modes[n] = int(np.sum(np.abs(energies) < tol))

    for n in range(0, max_n + 1):
        if spaces[n].dim == 0 or spaces[n + 1].dim == 0:
            continue
        q = build_supercharge(spaces[n], stagger, spaces[n + 1])
        sv = np.linalg.svd(q.to_dense(), compute_uv=False)
        report.doublets[(n, n + 1)] = np.sort(sv[sv**2 > tol] ** 2)
        if n + 2 in spaces and spaces[n + 2].dim:
            q2 = build_supercharge(spaces[n + 1], stagger, spaces[n + 2]) @ q
            report.nilpotency = max(report.nilpotency, q2.max_abs())

    for n, energies in report.spectra.items():
        nonzero = energies[np.abs(energies) >= tol]
        partners = [report.spectra[m] for m in (n - 1, n + 1) if m in report.spectra]
        for m in (n - 1, n + 1):
            if m not in report.spectra and 0 <= m <= max_n + 1 and spaces.get(m) is not None and spaces[m].dim:
                partners.append(np.linalg.eigvalsh(build_hq(spaces[m], stagger).to_dense()))
        pool = np.concatenate(partners) if partners else np.zeros(0)
        missing = [e for e in nonzero if pool.size == 0 or np.min(np.abs(pool - e)) > tol * max(1.0, abs(e))]
        report.unmatched[n] = np.array(missing)
    if any(v.size for v in report.unmatched.values()):
        logger.warning(f"Unpaired levels in sectors {[n for n, v in report.unmatched.items() if v.size]}")
    return report


def tail_fidelity(l: int, lam: float, design: PotentialDesign, range_cut: Optional[int] = None) -> float:
    """|⟨ψ_tails|ψ₀⟩| between the ground states of L=3l (pattern 1λ1) with and without interaction tails."""
    stagger = Staggering.ground_chain(l, lam)
    space = enumerate_space(stagger.L, l)
    exact = diagonalize(build_hq_dressed(space, stagger), 1).vectors[:, 0]
    tails = diagonalize(build_hq_dressed(space, stagger, design, tails=True, range_cut=range_cut), 1).vectors[:, 0]
    return float(abs(np.vdot(tails, exact)))


def max_slope_lambda(
    l: int, lams: Sequence[float], design: PotentialDesign, range_cut: Optional[int] = None
) -> Tuple[float, np.ndarray]:
    """λ of the steepest fidelity rise on the grid, and the fidelities themselves."""
    lams = np.asarray(lams, dtype=float)
    if lams.size < 3 or np.any(np.diff(lams) <= 0) or lams[0] <= 0:
        raise ValueError("Need at least three increasing positive lambda values")
    fid = np.array([tail_fidelity(l, lam, design, range_cut) for lam in lams])
    slope = np.gradient(fid, lams)
    return float(lams[int(np.argmax(slope))]), fid
