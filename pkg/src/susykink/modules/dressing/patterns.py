from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class OffCriticalPatterns:
    """Physical parameters realizing H_Q away from criticality, in units of J.

    H_Q = Σλ_i² − Σ_b hopping_b P(c†c + h.c.)P + Σ mu_i n_i + Σ w2_i n_i n_{i+2}.
    ``rabi`` are per-site Rabi multipliers with (Ω_iΩ_{i+2})² ∝ λ² w2_i; ``w3`` is the
    resulting (Ω_iΩ_{i+3})² pattern of the next tail, normalized to the λ-slot value.
    """

    lam: float
    hopping: np.ndarray
    w2: np.ndarray
    mu: np.ndarray
    rabi: np.ndarray
    w3: np.ndarray
    constant: float


def lambda_slots(L: int, pattern: str = "11l", offset: int = 0) -> np.ndarray:
    if offset not in (0, 1, 2):
        raise ValueError(f"Unsupported staggering offset {offset}")
    if len(pattern) != 3 or pattern.count("l") != 1:
        raise ValueError(f"Unsupported staggering pattern {pattern!r}")
    slots = np.array([c == "l" for c in pattern])
    return slots[(np.arange(L) + offset) % 3]


def offcritical_patterns(lam: float, L: int, pattern: str = "11l", offset: int = 0) -> OffCriticalPatterns:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if L < 3:
        raise ValueError(f"Need at least three sites, got L={L}")
    slots = lambda_slots(L, pattern, offset)
    couplings = np.where(slots, lam, 1.0)
    sq = couplings**2

    hopping = couplings[:-1] * couplings[1:]
    w2 = sq[1:-1]
    mu = np.zeros(L)
    mu[1:] -= sq[:-1]
    mu[:-1] -= sq[1:]
    rabi = np.where(slots, 1.0, lam)
    w3 = (rabi[:-3] * rabi[3:]) ** 2
    return OffCriticalPatterns(
        lam=lam, hopping=hopping, w2=w2, mu=mu, rabi=rabi, w3=w3, constant=float(sq.sum())
    )
