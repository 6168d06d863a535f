from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal, Optional, Tuple, Union

import numpy as np

Boundary = Literal["open", "periodic"]

# Occupation configurations are plain integers: bit (i - 1) is site i.
OccupationState = int

_BYTE_POPCOUNT = np.array([bin(b).count("1") for b in range(256)], dtype=np.int64)


def popcount(bits: Union[int, np.ndarray]) -> Union[int, np.ndarray]:
    """Number of set bits, vectorized over integer arrays."""
    if isinstance(bits, (int, np.integer)):
        return int(bits).bit_count()
    arr = np.asarray(bits, dtype=np.int64)
    total = np.zeros(arr.shape, dtype=np.int64)
    for shift in range(0, 64, 8):
        total += _BYTE_POPCOUNT[(arr >> shift) & 0xFF]
    return total


def site_mask(i: int) -> int:
    return 1 << (i - 1)


def left_mask(i: int) -> int:
    """Mask of all sites strictly left of site ``i``."""
    return (1 << (i - 1)) - 1


def _has_adjacent(bits: int, L: int, boundary: Boundary) -> bool:
    if bits & (bits >> 1):
        return True
    if boundary == "periodic" and L > 2:
        return bool((bits & 1) and (bits >> (L - 1)) & 1)
    return False


def apply_c_dag(state: OccupationState, i: int) -> Optional[Tuple[OccupationState, int]]:
    """Create a fermion on site ``i``.

    Returns ``None`` when the site is already occupied, otherwise the new
    configuration together with the Jordan-Wigner sign (-1)^(particles left of i).
    """
    if i < 1:
        raise ValueError(f"Site index must be >= 1, got {i}")
    bit = site_mask(i)
    if state & bit:
        return None
    sign = -1 if popcount(state & left_mask(i)) % 2 else 1
    return state | bit, sign


def apply_c(state: OccupationState, i: int) -> Optional[Tuple[OccupationState, int]]:
    """Annihilate the fermion on site ``i`` (``None`` if the site is empty)."""
    if i < 1:
        raise ValueError(f"Site index must be >= 1, got {i}")
    bit = site_mask(i)
    if not state & bit:
        return None
    sign = -1 if popcount(state & left_mask(i)) % 2 else 1
    return state & ~bit, sign


@dataclass(frozen=True)
class HilbertSpace:
    """Fixed particle-number sector of spinless fermions on an L-site chain.

    ``states`` is sorted ascending, so ranking is a binary search.
    """

    L: int
    n: int
    boundary: Boundary = "open"
    constrained: bool = True
    states: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64), repr=False)

    @property
    def dim(self) -> int:
        return int(self.states.size)

    def index_of(self, bits: Union[int, np.ndarray]) -> Union[int, np.ndarray]:
        """Ordinal of each configuration, -1 where it is not part of the basis."""
        scalar = np.isscalar(bits)
        query = np.atleast_1d(np.asarray(bits, dtype=np.int64))
        if self.dim == 0:
            out = np.full(query.shape, -1, dtype=np.int64)
        else:
            pos = np.searchsorted(self.states, query)
            pos_clipped = np.minimum(pos, self.dim - 1)
            found = self.states[pos_clipped] == query
            out = np.where(found, pos_clipped, -1)
        return int(out[0]) if scalar else out

    def occupations(self) -> np.ndarray:
        """(dim, L) array of 0/1 site occupations."""
        sites = np.arange(self.L, dtype=np.int64)
        return ((self.states[:, None] >> sites[None, :]) & 1).astype(float)

    def same_lattice(self, other: "HilbertSpace") -> bool:
        return self.L == other.L and self.boundary == other.boundary and self.constrained == other.constrained

    def subspace(self, empty_sites: Tuple[int, ...]) -> Tuple["HilbertSpace", np.ndarray]:
        """Restrict to configurations with the given sites empty.

        Returns the restricted space and the ordinals of its states in ``self``.
        """
        mask = 0
        for i in empty_sites:
            if not 1 <= i <= self.L:
                raise ValueError(f"Site {i} outside chain of length {self.L}")
            mask |= site_mask(i)
        keep = np.flatnonzero((self.states & mask) == 0)
        sub = HilbertSpace(self.L, self.n, self.boundary, self.constrained, self.states[keep])
        return sub, keep


def enumerate_space(L: int, n: int, boundary: Boundary = "open", constrained: bool = True) -> HilbertSpace:
    """All configurations of ``n`` fermions on ``L`` sites.

    With ``constrained`` no two neighbouring sites are occupied (including the
    (L, 1) bond on a periodic chain). An empty sector is returned with dimension 0.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not 0 <= n <= L:
        raise ValueError(f"Particle number must satisfy 0 <= n <= L, got n={n}, L={L}")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"Unknown boundary condition: {boundary}")

    states = []
    for sites in combinations(range(L), n):
        bits = 0
        for s in sites:
            bits |= 1 << s
        if constrained and _has_adjacent(bits, L, boundary):
            continue
        states.append(bits)
    arr = np.sort(np.array(states, dtype=np.int64))
    return HilbertSpace(L=L, n=n, boundary=boundary, constrained=constrained, states=arr)


@dataclass(frozen=True)
class RydbergSpace:
    """Atoms on an L-site chain, each either in the ground (0) or Rydberg (1) state.

    ``internal`` bit j holds the state of the j-th atom counted in ascending site order.
    """

    L: int
    n: int
    positions: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, dtype=np.int64))
    internal: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def dim(self) -> int:
        return int(self.positions.size)

    @property
    def keys(self) -> np.ndarray:
        return (self.positions << self.n) | self.internal

    def index_of(self, positions: np.ndarray, internal: np.ndarray) -> np.ndarray:
        query = (np.asarray(positions, dtype=np.int64) << self.n) | np.asarray(internal, dtype=np.int64)
        keys = self.keys
        pos = np.minimum(np.searchsorted(keys, query), self.dim - 1)
        return np.where(keys[pos] == query, pos, -1)

    def site_states(self) -> Tuple[np.ndarray, np.ndarray]:
        """Per-site occupation (any atom) and Rydberg occupation, both (dim, L)."""
        occ = np.zeros((self.dim, self.L))
        ryd = np.zeros((self.dim, self.L))
        for row, (pos, inner) in enumerate(zip(self.positions.tolist(), self.internal.tolist())):
            atom = 0
            for site in range(self.L):
                if (pos >> site) & 1:
                    occ[row, site] = 1.0
                    ryd[row, site] = float((inner >> atom) & 1)
                    atom += 1
        return occ, ryd

    def embed(self, space: HilbertSpace, vector: np.ndarray) -> np.ndarray:
        """Map a fermion state into this space with every atom in the ground state."""
        if space.L != self.L or space.n != self.n:
            raise ValueError(f"Cannot embed (L={space.L}, n={space.n}) into (L={self.L}, n={self.n})")
        out = np.zeros(self.dim, dtype=complex)
        idx = self.index_of(space.states, np.zeros(space.dim, dtype=np.int64))
        out[idx] = vector
        return out


def enumerate_rydberg(L: int, n: int) -> RydbergSpace:
    """Unconstrained product space of dimension C(L, n) * 2**n."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not 0 <= n <= L:
        raise ValueError(f"Atom number must satisfy 0 <= n <= L, got n={n}, L={L}")
    base = enumerate_space(L, n, constrained=False).states
    internal = np.arange(1 << n, dtype=np.int64)
    positions = np.repeat(base, internal.size)
    inner = np.tile(internal, base.size)
    # sorted by (position, internal) since base is sorted
    return RydbergSpace(L=L, n=n, positions=positions, internal=inner)
