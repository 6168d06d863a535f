"""Coherence budget: largest chain a kink can traverse before Rydberg-state scattering sets in."""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, Field, model_validator

from ..modules.dressing import LATTICE_SPACING_UM, DressingLayer, mhz
from .analytic import v_max

# zero-temperature, 30 K and room-temperature lifetimes of the 84S level in seconds
LIFETIMES = {"0K": 8.6e-3, "30K": 2.8e-3, "273K": 0.42e-3}


class BudgetParams(BaseModel):
    """Dressing and decoherence parameters. Ω, Δ angular (rad/s), C₆ in Hz·μm⁶, r₀ in μm, τ₀ in s."""

    Omega: float = mhz(10.0)
    Delta: float = mhz(100.0)
    C6: float = 645e9
    r0: float = LATTICE_SPACING_UM
    tau0: float = LIFETIMES["0K"]
    kappa: float = 0.0
    E_scft: float = 1.0 / 3.0
    p_bar: float = 2.0 / math.pi
    lam: float = Field(1.0, ge=0.0, le=1.0)
    evolution: bool = True

    @model_validator(mode="after")
    def _check(self) -> "BudgetParams":
        for name in ("Omega", "Delta", "C6", "r0", "tau0"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.kappa < 0 or self.p_bar < 0 or self.E_scft <= 0:
            raise ValueError("kappa and p_bar must be non-negative, E_scft positive")
        if self.lam == 0.0:
            raise ValueError("Kinks do not propagate at lambda = 0")
        return self

    @property
    def perturbative(self) -> bool:
        return self.Omega / self.Delta < 1.0

    @property
    def layer(self) -> DressingLayer:
        return DressingLayer(Omega=self.Omega, Delta=self.Delta, C6=self.C6)

    @property
    def hopping(self) -> float:
        """J = W(2r₀)."""
        return float(self.layer.potential(2 * self.r0))

    @property
    def velocity(self) -> float:
        return v_max(self.lam)


def scattering_rate(p: BudgetParams, L: float) -> float:
    """γ = (L/3)(1/τ₀)(Ω/Δ)²: decay rate of the ≈ L/3 dressed atoms."""
    return L / 3.0 / p.tau0 * (p.Omega / p.Delta) ** 2


def critical_time(p: BudgetParams) -> float:
    """T_c = 1/(3 v W(2r₀)), the time a kink needs per lattice site."""
    return 1.0 / (3.0 * p.velocity * p.hopping)


def coherence_budget(p: BudgetParams, include_preparation: bool = True) -> float:
    """L_max from Γ T_prep + γ t = 1 with T_prep = κ/Δ_sg and t = L T_c."""
    v2 = p.C6 / (2 * p.r0) ** 6
    base = 2.0 * p.tau0 * p.velocity / (p.Delta * (1.0 + 2.0 * p.Delta / v2))
    kappa = p.kappa if include_preparation else 0.0
    denom = p.E_scft * kappa * p.p_bar / (2.0 * math.pi) + (1.0 if p.evolution else 0.0)
    if denom <= 0:
        raise ValueError("Neither preparation nor evolution contributes to the budget")
    return 3.0 * p.Omega * math.sqrt(base / denom)


def budget_table(
    detuning_ratios: Sequence[float],
    lifetimes: Optional[Dict[str, float]] = None,
    base: Optional[BudgetParams] = None,
    include_preparation: bool = True,
) -> List[dict]:
    """L_max over Δ/Ω at fixed Ω, one row per (label, Δ/Ω)."""
    lifetimes = dict(LIFETIMES if lifetimes is None else lifetimes)
    base = base or BudgetParams()
    rows = []
    for label, tau0 in lifetimes.items():
        for ratio in detuning_ratios:
            if ratio <= 0:
                raise ValueError(f"Detuning ratio must be positive, got {ratio}")
            p = base.model_copy(update={"tau0": tau0, "Delta": base.Omega * ratio})
            rows.append(
                {
                    "lifetime": label,
                    "tau0": tau0,
                    "delta_over_omega": float(ratio),
                    "J": p.hopping,
                    "L_max": coherence_budget(p, include_preparation),
                }
            )
    return rows


def lattice_hopping(depth: float) -> float:
    """Tight-binding J/E_r = (4/√π)(V₀/E_r)^{3/4} exp(−2√(V₀/E_r))."""
    if depth <= 0:
        raise ValueError(f"Lattice depth must be positive, got {depth}")
    return 4.0 / math.sqrt(math.pi) * depth**0.75 * math.exp(-2.0 * math.sqrt(depth))
