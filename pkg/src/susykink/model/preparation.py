"""Adiabatic preparation of ground states, kinks and skinks from pinned product states."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from ..modules.hilbert import HilbertSpace, enumerate_space
from ..modules.operators import LinearOperator, Staggering, build_hq, number_operator
from .kinks import KinkBasis, bare_kink_sites
from .dynamics import propagate
from .spectra import diagonalize, kink_basis

logger = logging.getLogger(__name__)

Target = Literal["gs", "kink", "skink"]


class SweepProtocol(BaseModel):
    """H(t) = (1 − F(t)) H_i + F(t) H_f with H_i = −Σ(αi + μ₀)n_i − μ Σ_{i∈s} n_i. Energies in units of J."""

    T: float = 150.0
    dt: float = 0.05
    schedule: Literal["cosine", "smoothstep"] = "cosine"
    mu: float = 100.0
    mu0: float = 1.0
    alpha: float = 0.1
    evaluation: Literal["left", "midpoint"] = "left"
    projection: bool = True
    mu_final: float = 100.0
    skink_mu: float = 3.0
    skink_nu: float = 0.5
    gap_checkpoints: int = 21
    gap_threshold: float = 1e-3

    @model_validator(mode="after")
    def _check(self) -> "SweepProtocol":
        if self.T <= 0 or self.dt <= 0:
            raise ValueError(f"Sweep duration and step must be positive, got T={self.T}, dt={self.dt}")
        if self.dt > self.T:
            raise ValueError(f"Step dt={self.dt} exceeds the sweep duration T={self.T}")
        if self.gap_checkpoints < 2:
            raise ValueError("Need at least two gap checkpoints")
        return self

    def ramp(self, t: float) -> float:
        """F(t): 0 at t=0, 1 at t=T, twice differentiable."""
        x = min(max(t / self.T, 0.0), 1.0)
        if self.schedule == "cosine":
            return 0.5 * (1.0 - np.cos(np.pi * x))
        return x**3 * (10.0 - 15.0 * x + 6.0 * x**2)


@dataclass
class PreparationResult:
    state: np.ndarray
    space: HilbertSpace
    fidelity: float
    target: np.ndarray
    min_gap: float
    gap_times: np.ndarray
    gaps: np.ndarray
    warnings: List[str] = field(default_factory=list)


@dataclass
class PinnedState:
    """Ground state of a pinning final Hamiltonian and its overlap with the ideal (s)kink."""

    vector: np.ndarray
    space: HilbertSpace
    energy: float
    fidelity: float


def pinning_hamiltonian(space: HilbertSpace, sites: Sequence[int], protocol: SweepProtocol) -> LinearOperator:
    occ = space.occupations()
    positions = np.arange(1, space.L + 1)
    diag = -occ @ (protocol.alpha * positions + protocol.mu0)
    pinned = np.zeros(space.L)
    pinned[np.asarray(sites) - 1] = 1.0
    diag = diag - protocol.mu * (occ @ pinned)
    return LinearOperator.diagonal(diag, space)


def product_state(space: HilbertSpace, sites: Sequence[int]) -> np.ndarray:
    bits = sum(1 << (s - 1) for s in sites)
    idx = space.index_of(bits)
    if idx < 0:
        raise ValueError(f"Product state on sites {list(sites)} is not in the space")
    out = np.zeros(space.dim, dtype=complex)
    out[idx] = 1.0
    return out


def _skink_potential(space: HilbertSpace, mu_bar: float, nu_bar: float, left: bool = True) -> LinearOperator:
    L = space.L
    a, b, c = (1, 2, 3) if left else (L, L - 1, L - 2)
    return (number_operator(space, a) * -1.0 + number_operator(space, b) - number_operator(space, c) * nu_bar) * mu_bar


def _kink_pins(l: int, j: int) -> Tuple[int, ...]:
    L = 3 * l + 1
    if j == 1:
        return (1, 2)
    if j == l + 1:
        return (L - 1, L)
    return (3 * (j - 1), 3 * (j - 1) + 1, 3 * (j - 1) + 2)


def pinned_ground_state(
    l: int,
    lam: float,
    target: Literal["kink", "skink"] = "kink",
    j: int = 1,
    protocol: Optional[SweepProtocol] = None,
    basis: Optional[KinkBasis] = None,
) -> PinnedState:
    """Ground state |K_j′⟩ of the final Hamiltonian and the reduced fidelity with |K_j⟩ (or Q|K_j⟩)."""
    protocol = protocol or SweepProtocol()
    if not 1 <= j <= l + 1:
        raise ValueError(f"Kink index must lie in 1..{l + 1}, got {j}")
    stagger = Staggering.kink_chain(l, lam)
    if basis is None:
        basis = kink_basis(l, lam)

    if target == "kink":
        space = basis.space
        h = build_hq(space, stagger)
        pins = _kink_pins(l, j)
        ideal = basis.kink(j)
        if protocol.projection:
            sub, keep = space.subspace(pins)
            spec = diagonalize(h.restrict(keep, sub), 1)
            vector = np.zeros(space.dim, dtype=spec.vectors.dtype)
            vector[keep] = spec.vectors[:, 0]
        else:
            occ = space.occupations()[:, np.asarray(pins) - 1].sum(axis=1)
            spec = diagonalize(h + LinearOperator.diagonal(protocol.mu_final * occ, space), 1)
            vector = spec.vectors[:, 0]
    elif target == "skink":
        if j not in (1, l + 1):
            raise ValueError(f"Skink pinning is defined for the edge skinks 1 and {l + 1}, got {j}")
        space = basis.skink_space
        h = build_hq(space, stagger) + _skink_potential(space, protocol.skink_mu, protocol.skink_nu, left=j == 1)
        spec = diagonalize(h, 1)
        vector = spec.vectors[:, 0]
        ideal = basis.superpartner(j)
    else:
        raise ValueError(f"Unknown pinning target: {target}")
    return PinnedState(
        vector=vector, space=space, energy=float(spec.energies[0]), fidelity=float(abs(np.vdot(vector, ideal)))
    )


def _scenario(target: Target, l: int, lam: float, j: int, protocol: SweepProtocol, basis: Optional[KinkBasis]):
    """Space, H_i, H_f, initial state, target state and the embedding of the sweep space."""
    keep = None
    if target == "gs":
        stagger = Staggering.ground_chain(l, lam)
        space = enumerate_space(stagger.L, l)
        h_f = build_hq(space, stagger)
        sites = [3 * m - 1 for m in range(1, l + 1)]
        goal = diagonalize(h_f, 1).vectors[:, 0]
        return space, space, pinning_hamiltonian(space, sites, protocol), h_f, product_state(space, sites), goal, keep

    if target not in ("kink", "skink"):
        raise ValueError(f"Unknown preparation target: {target}")
    stagger = Staggering.kink_chain(l, lam)
    if basis is None:
        basis = kink_basis(l, lam)
    # first configuration of the bare kink; the pinning field lifts the rest
    sites = bare_kink_sites(l, j)[0]
    if target == "kink":
        space = basis.space
        pins = _kink_pins(l, j)
        h_q = build_hq(space, stagger)
        if protocol.projection:
            sub, keep = space.subspace(pins)
            h_f = h_q.restrict(keep, sub)
            sweep_space = sub
        else:
            occ = space.occupations()[:, np.asarray(pins) - 1].sum(axis=1)
            h_f = h_q + LinearOperator.diagonal(protocol.mu_final * occ, space)
            sweep_space = space
        return (
            space,
            sweep_space,
            pinning_hamiltonian(sweep_space, sites, protocol),
            h_f,
            product_state(sweep_space, sites),
            basis.kink(j),
            keep,
        )

    if j not in (1, l + 1):
        raise ValueError(f"Skink preparation is defined for the edge skinks 1 and {l + 1}, got {j}")
    space = basis.skink_space
    sites = sorted(sites + [1 if j == 1 else stagger.L])
    h_f = build_hq(space, stagger) + _skink_potential(space, protocol.skink_mu, protocol.skink_nu, left=j == 1)
    return space, space, pinning_hamiltonian(space, sites, protocol), h_f, product_state(space, sites), basis.superpartner(j), keep


def adiabatic_prepare(
    protocol: SweepProtocol,
    target: Target,
    l: int,
    lam: float,
    basis: Optional[KinkBasis] = None,
    progress: bool = False,
    j: int = 1,
) -> PreparationResult:
    """Sweep from the pinned product state to the target Hamiltonian with Crank-Nicolson steps.

    Targets: ``gs`` (L=3l, pattern 1λ1, fidelity with the H_Q ground state), ``kink`` (|K_j⟩, any j)
    and ``skink`` (Q|K_j⟩ normalized, edge j only) on L=3l+1 with pattern 11λ.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if target != "gs" and not 1 <= j <= l + 1:
        raise ValueError(f"Kink index must lie in 1..{l + 1}, got {j}")
    space, sweep_space, h_i, h_f, psi0, goal, keep = _scenario(target, l, lam, j, protocol, basis)

    def hamiltonian(t: float) -> LinearOperator:
        f = protocol.ramp(t)
        return h_i * (1.0 - f) + h_f * f

    n_steps = int(np.ceil(protocol.T / protocol.dt))
    series = propagate(
        psi0,
        hamiltonian,
        [protocol.T],
        method="cn",
        dt=protocol.T / n_steps,
        evaluation=protocol.evaluation,
        progress=progress,
    )
    final = series.final_state
    if keep is not None:
        state = np.zeros(space.dim, dtype=complex)
        state[keep] = final
    else:
        state = final

    warnings: List[str] = []
    gap_times = np.linspace(0.0, protocol.T, protocol.gap_checkpoints)
    gaps = np.array([np.diff(diagonalize(hamiltonian(t), 2).energies[:2])[0] for t in gap_times])
    min_gap = float(gaps.min())
    if min_gap < protocol.gap_threshold:
        message = f"Instantaneous gap {min_gap:.3e} below {protocol.gap_threshold} at t={gap_times[np.argmin(gaps)]:.3f}"
        logger.warning(message)
        warnings.append(message)

    fidelity = float(abs(np.vdot(state, goal)))
    logger.info(f"Prepared {target} for l={l}, lambda={lam}, T={protocol.T}: F={fidelity:.6f}, min gap {min_gap:.4f}")
    return PreparationResult(
        state=state, space=space, fidelity=fidelity, target=goal, min_gap=min_gap, gap_times=gap_times, gaps=gaps, warnings=warnings
    )
