"""Supercharge Q = Σ_i (-1)^i λ_i c†_i P_<i>, the Hamiltonian H_Q = {Q, Q†} and its local densities."""

from __future__ import annotations

from typing import Iterable, List, Optional

import numpy as np

from ..hilbert import HilbertSpace, enumerate_space, popcount
from .config import Staggering
from .linear import LinearOperator


def neighbour_sector(space: HilbertSpace, shift: int) -> HilbertSpace:
    """The sector with ``space.n + shift`` particles on the same lattice (empty when out of range)."""
    n = space.n + shift
    if n < 0 or n > space.L:
        return HilbertSpace(space.L, max(n, 0), space.boundary, space.constrained)
    return enumerate_space(space.L, n, space.boundary, space.constrained)


def _check_stagger(space: HilbertSpace, stagger: Staggering) -> None:
    if stagger.L != space.L:
        raise ValueError(f"Staggering is defined for L={stagger.L}, space has L={space.L}")
    if not space.constrained:
        raise ValueError("The supercharge acts on the constrained (nearest-neighbour exclusion) space only")


def _creation_entries(space_n: HilbertSpace, target: HilbertSpace, stagger: Staggering, sites: Iterable[int]):
    lam = stagger.vector()
    # the alternating sign is a gauge choice on open chains; odd periodic rings take the uniform one
    alternating = space_n.boundary == "open"
    rows, cols, vals = [], [], []
    states = space_n.states
    if space_n.dim == 0 or target.dim == 0:
        return rows, cols, vals
    for i in sites:
        coupling = ((-1) ** i if alternating else 1) * lam[i - 1]
        if coupling == 0.0:
            continue
        bit = 1 << (i - 1)
        empty = np.flatnonzero((states & bit) == 0)
        idx = target.index_of(states[empty] | bit)
        ok = idx >= 0
        src = empty[ok]
        signs = 1 - 2 * (popcount(states[src] & (bit - 1)) % 2)
        rows.append(idx[ok])
        cols.append(src)
        vals.append(coupling * signs)
    return rows, cols, vals


def _assemble(space_n: HilbertSpace, target: HilbertSpace, stagger: Staggering, sites) -> LinearOperator:
    rows, cols, vals = _creation_entries(space_n, target, stagger, sites)
    if not rows:
        return LinearOperator.zeros(space_n, target)
    return LinearOperator.from_coo(
        np.concatenate(rows), np.concatenate(cols), np.concatenate(vals).astype(float), space_n, target
    )


def build_supercharge(
    space_n: HilbertSpace, stagger: Staggering, target: Optional[HilbertSpace] = None
) -> LinearOperator:
    """Q restricted to the n-particle sector, mapping it into the (n+1)-particle sector."""
    _check_stagger(space_n, stagger)
    if target is None:
        target = neighbour_sector(space_n, +1)
    elif not space_n.same_lattice(target) or target.n != space_n.n + 1:
        raise ValueError(
            f"Supercharge target must share the lattice and hold n+1={space_n.n + 1} particles, got n={target.n}"
        )
    return _assemble(space_n, target, stagger, range(1, space_n.L + 1))


def build_site_supercharge(space_n: HilbertSpace, stagger: Staggering, i: int, target: Optional[HilbertSpace] = None):
    _check_stagger(space_n, stagger)
    if not 1 <= i <= space_n.L:
        raise ValueError(f"Site {i} outside chain of length {space_n.L}")
    if target is None:
        target = neighbour_sector(space_n, +1)
    return _assemble(space_n, target, stagger, [i])


def build_hq(space_n: HilbertSpace, stagger: Staggering) -> LinearOperator:
    """H_Q on the n-particle sector: Q†Q (through n+1) plus QQ† (through n-1)."""
    _check_stagger(space_n, stagger)
    lower = neighbour_sector(space_n, -1)
    up = build_supercharge(space_n, stagger)
    h = up.dagger() @ up
    if space_n.n > 0:
        down = build_supercharge(lower, stagger, target=space_n)
        h = h + down @ down.dagger()
    return h


def build_local_energies(space_n: HilbertSpace, stagger: Staggering) -> List[LinearOperator]:
    """h_i = ½({Q, Q_i†} + {Q†, Q_i}) for every site, sharing the sector-level supercharges."""
    _check_stagger(space_n, stagger)
    upper = neighbour_sector(space_n, +1)
    lower = neighbour_sector(space_n, -1)
    b = build_supercharge(space_n, stagger, upper)
    a = build_supercharge(lower, stagger, space_n) if space_n.n > 0 else None
    out = []
    for i in range(1, space_n.L + 1):
        b_i = _assemble(space_n, upper, stagger, [i])
        h = b_i.dagger() @ b + b.dagger() @ b_i
        if a is not None:
            a_i = _assemble(lower, space_n, stagger, [i])
            h = h + a @ a_i.dagger() + a_i @ a.dagger()
        out.append(h * 0.5)
    return out


def build_local_energy(space_n: HilbertSpace, stagger: Staggering, i: int) -> LinearOperator:
    if not 1 <= i <= space_n.L:
        raise ValueError(f"Site {i} outside chain of length {space_n.L}")
    _check_stagger(space_n, stagger)
    upper = neighbour_sector(space_n, +1)
    b = build_supercharge(space_n, stagger, upper)
    b_i = _assemble(space_n, upper, stagger, [i])
    h = b_i.dagger() @ b + b.dagger() @ b_i
    if space_n.n > 0:
        lower = neighbour_sector(space_n, -1)
        a = build_supercharge(lower, stagger, space_n)
        a_i = _assemble(lower, space_n, stagger, [i])
        h = h + a @ a_i.dagger() + a_i @ a.dagger()
    return h * 0.5


def number_operator(space: HilbertSpace, i: Optional[int] = None) -> LinearOperator:
    """n_i, or the total particle number when ``i`` is None."""
    occ = space.occupations()
    values = occ.sum(axis=1) if i is None else occ[:, i - 1]
    return LinearOperator.diagonal(values, space)
