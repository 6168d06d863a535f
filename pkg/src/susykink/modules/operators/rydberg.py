"""Rydberg-dressed chain: hopping ground-state atoms, Rabi drive, detuning and van der Waals tails."""

from __future__ import annotations

import numpy as np

from ..hilbert import RydbergSpace, popcount
from .config import RydbergParams
from .linear import LinearOperator


def interaction_matrix(params: RydbergParams) -> np.ndarray:
    """V_ij between sites, zero beyond ``range_cut`` and on the diagonal."""
    L = params.L
    dist = np.abs(np.subtract.outer(np.arange(L), np.arange(L)))
    out = np.zeros((L, L))
    mask = dist > 0
    if params.range_cut is not None:
        mask &= dist <= params.range_cut
    out[mask] = params.C6 / (params.r0 * dist[mask]) ** 6
    return out


def build_rydberg(space: RydbergSpace, params: RydbergParams) -> LinearOperator:
    if params.L != space.L:
        raise ValueError(f"RydbergParams describe L={params.L} sites, space has L={space.L}")
    pos, inner = space.positions, space.internal
    rows, cols, vals = [], [], []

    occ, ryd = space.site_states()
    mobile = occ if params.rydberg_hopping else occ - ryd
    vmat = interaction_matrix(params)
    diag = mobile @ np.asarray(params.mu) + params.Delta * ryd.sum(axis=1) + 0.5 * np.einsum("si,ij,sj->s", ryd, vmat, ryd)
    rows.append(np.arange(space.dim))
    cols.append(np.arange(space.dim))
    vals.append(diag)

    for a in range(space.L):
        bit = 1 << a
        atom = popcount(pos & (bit - 1))
        has_atom = (pos & bit) != 0

        # σˣ on site a+1
        src = np.flatnonzero(has_atom)
        if src.size and params.Omega[a] != 0.0:
            dst = space.index_of(pos[src], inner[src] ^ (1 << atom[src]))
            rows.append(dst)
            cols.append(src)
            vals.append(np.full(src.size, params.Omega[a], dtype=float))

        # nearest-neighbour hop a+1 <-> a+2; no atoms in between, so no fermionic sign
        if a + 1 < space.L:
            nbit = bit << 1
            for here, there in ((bit, nbit), (nbit, bit)):
                can = ((pos & here) != 0) & ((pos & there) == 0)
                if not params.rydberg_hopping:
                    moving = popcount(pos & (here - 1))
                    can &= ((inner >> moving) & 1) == 0
                src = np.flatnonzero(can)
                if not src.size:
                    continue
                dst = space.index_of(pos[src] ^ here ^ there, inner[src])
                rows.append(dst)
                cols.append(src)
                vals.append(np.full(src.size, -params.J))

    return LinearOperator.from_coo(
        np.concatenate(rows), np.concatenate(cols), np.concatenate(vals).astype(float), space, space
    )


def rydberg_population(space: RydbergSpace) -> LinearOperator:
    """Σ_i n^r_i."""
    _, ryd = space.site_states()
    return LinearOperator.diagonal(ryd.sum(axis=1), space)


def neighbour_ground_pairs(space: RydbergSpace) -> LinearOperator:
    """Σ_i n^g_i n^g_{i+1}: ground-state atoms sitting on neighbouring sites."""
    occ, ryd = space.site_states()
    g = occ - ryd
    return LinearOperator.diagonal((g[:, :-1] * g[:, 1:]).sum(axis=1), space)
