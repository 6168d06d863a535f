from __future__ import annotations

from typing import Optional

import numpy as np

from ..dressing import PotentialDesign, offcritical_patterns
from ..hilbert import HilbertSpace, popcount
from .config import Staggering
from .linear import LinearOperator


def build_hq_dressed(
    space: HilbertSpace,
    stagger: Staggering,
    design: Optional[PotentialDesign] = None,
    tails: bool = False,
    range_cut: Optional[int] = None,
) -> LinearOperator:
    """Ground-state-atom Hamiltonian of the dressed lattice, in units of J.

    Hopping, chemical potentials and Rabi multipliers follow the off-critical patterns. Without a
    design the next-nearest interaction is the exact pattern and the space must be constrained.
    With a design every pair interaction comes from the dressed potential with per-site Rabi
    multipliers, normalized by J = λ² W_tot(2r₀); on an unconstrained space the nearest-neighbour
    (soft blockade) term is included, and ``tails`` adds all distances ≥ 3 up to ``range_cut``.
    """
    if stagger.L != space.L:
        raise ValueError(f"Staggering is defined for L={stagger.L}, space has L={space.L}")
    if design is None and not space.constrained:
        raise ValueError("A finite blockade needs a potential design; pass a constrained space otherwise")
    if design is None and tails:
        raise ValueError("Interaction tails need a potential design")
    pat = offcritical_patterns(stagger.lam, stagger.L, stagger.pattern, stagger.offset)
    L = space.L
    occ = space.occupations()
    states = space.states

    rows, cols, vals = [], [], []
    for b in range(L - 1):
        amp = pat.hopping[b]
        if amp == 0.0 or space.dim == 0:
            continue
        pair = (1 << b) | (1 << (b + 1))
        src = np.flatnonzero(popcount(states & pair) == 1)
        dst = space.index_of(states[src] ^ pair)
        ok = dst >= 0
        rows.append(dst[ok])
        cols.append(src[ok])
        vals.append(np.full(int(ok.sum()), -amp))

    diag = pat.constant + occ @ pat.mu
    if design is None:
        diag = diag + (occ[:, :-2] * occ[:, 2:]) @ pat.w2
    else:
        if stagger.lam == 0.0:
            raise ValueError("The dressed realization needs lambda > 0")
        unit = stagger.lam**2 * design.at_spacing(2)
        max_dist = L - 1 if range_cut is None else min(range_cut, L - 1)
        distances = [2] if not tails else list(range(2, max_dist + 1))
        if not space.constrained:
            distances = [1] + distances
        for d in distances:
            weights = np.array(
                [design.at_spacing(d, pat.rabi[i], pat.rabi[i + d]) for i in range(L - d)]
            ) / unit
            diag = diag + (occ[:, :-d] * occ[:, d:]) @ weights

    rows.append(np.arange(space.dim))
    cols.append(np.arange(space.dim))
    vals.append(diag)
    return LinearOperator.from_coo(
        np.concatenate(rows), np.concatenate(cols), np.concatenate(vals).astype(float), space, space
    )
