from __future__ import annotations

from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..dressing import LATTICE_SPACING_UM, DressingLayer


class Staggering(BaseModel):
    """Period-3 coupling pattern. ``pattern`` uses '1' for unit slots and 'l' for the λ slot."""

    model_config = ConfigDict(populate_by_name=True)

    L: int
    pattern: str = "11l"
    offset: int = 0
    lam: float = Field(1.0, alias="lambda")

    @field_validator("pattern")
    @classmethod
    def _check_pattern(cls, value: str) -> str:
        if len(value) != 3 or set(value) - {"1", "l"} or value.count("l") != 1:
            raise ValueError(f"pattern must be three symbols from '1'/'l' with exactly one 'l', got {value!r}")
        return value

    @model_validator(mode="after")
    def _check_ranges(self) -> "Staggering":
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if self.offset not in (0, 1, 2):
            raise ValueError(f"offset must be 0, 1 or 2, got {self.offset}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        return self

    @classmethod
    def kink_chain(cls, l: int, lam: float) -> "Staggering":
        """L = 3l + 1 with pattern 11λ: the chain hosting one kink in the l-particle sector."""
        return cls(L=3 * l + 1, pattern="11l", offset=0, lam=lam)

    @classmethod
    def ground_chain(cls, l: int, lam: float) -> "Staggering":
        """L = 3l with pattern 1λ1: unique zero-energy ground state."""
        return cls(L=3 * l, pattern="1l1", offset=0, lam=lam)

    def with_lambda(self, lam: float) -> "Staggering":
        return Staggering(L=self.L, pattern=self.pattern, offset=self.offset, lam=lam)

    def lambda_slots(self) -> np.ndarray:
        """Boolean mask, True where site i carries the λ coupling."""
        slots = np.array([c == "l" for c in self.pattern])
        return slots[(np.arange(self.L) + self.offset) % 3]

    def vector(self) -> np.ndarray:
        return np.where(self.lambda_slots(), self.lam, 1.0)


class RydbergParams(BaseModel):
    """Parameters of the Rydberg-dressed chain, all energies in the same unit."""

    J: float = 1.0
    mu: List[float]
    Omega: List[float]
    Delta: float
    C6: float
    r0: float = 2.5
    range_cut: Optional[int] = None  # None: unlimited
    rydberg_hopping: bool = False

    @model_validator(mode="after")
    def _check(self) -> "RydbergParams":
        if self.J <= 0:
            raise ValueError(f"J must be positive, got {self.J}")
        if self.r0 <= 0:
            raise ValueError(f"r0 must be positive, got {self.r0}")
        if self.range_cut is not None and self.range_cut < 1:
            raise ValueError(f"range_cut must be >= 1, got {self.range_cut}")
        if len(self.mu) != len(self.Omega):
            raise ValueError(f"mu and Omega must have one entry per site ({len(self.mu)} != {len(self.Omega)})")
        return self

    @property
    def L(self) -> int:
        return len(self.mu)

    def pair_interaction(self, distance: int) -> float:
        """Bare van der Waals interaction between Rydberg atoms ``distance`` sites apart."""
        if self.range_cut is not None and distance > self.range_cut:
            return 0.0
        return self.C6 / (self.r0 * distance) ** 6

    def truncated(self, range_cut: Optional[int]) -> "RydbergParams":
        return self.model_copy(update={"range_cut": range_cut})

    @classmethod
    def from_layer(cls, layer: DressingLayer, L: int, r0: float = LATTICE_SPACING_UM, **kwargs) -> "RydbergParams":
        """Chain realizing H_Q at λ=1: J = W(2r₀), μ = J on the two edge sites, uniform drive."""
        if L < 3:
            raise ValueError(f"Need at least three sites, got L={L}")
        J = float(layer.potential(2 * r0))
        mu = [0.0] * L
        mu[0] = mu[-1] = J
        return cls(J=J, mu=mu, Omega=[layer.Omega] * L, Delta=layer.Delta, C6=layer.C6, r0=r0, **kwargs)

    def scaled(self) -> "RydbergParams":
        """The same chain with every energy divided by J, so that times are in units of 1/J."""
        J = self.J
        return self.model_copy(
            update={
                "J": 1.0,
                "mu": [m / J for m in self.mu],
                "Omega": [o / J for o in self.Omega],
                "Delta": self.Delta / J,
                "C6": self.C6 / J,
            }
        )

    def layer(self) -> DressingLayer:
        """Single dressing layer with the strongest site drive."""
        return DressingLayer(Omega=max(self.Omega, key=abs), Delta=self.Delta, C6=self.C6)
