from __future__ import annotations

from typing import Literal, Tuple, Union

import numpy as np

from ...utils import NumericalError
from ..hilbert import HilbertSpace, RydbergSpace
from .linear import LinearOperator

ObservableKind = Literal["dn", "dn3", "dnbar"]

# sign and number of trailing sites entering each kink detector
_LAYOUT = {"dn": (1.0, 2), "dn3": (1.0, 3), "dnbar": (-1.0, 3)}

# exact coefficients at extreme staggering
EXTREME_COEFFS = {"dn": (1.0, 1.0), "dn3": (2.0, 1.0), "dnbar": (2.0, 1.0)}


def _occupations(space: Union[HilbertSpace, RydbergSpace]) -> np.ndarray:
    if isinstance(space, RydbergSpace):
        return space.site_states()[0]
    return space.occupations()


def edge_occupation(kind: ObservableKind, space: Union[HilbertSpace, RydbergSpace]) -> np.ndarray:
    """Diagonal of the summed occupation of the last two (dn) or three (dn3, dnbar) sites."""
    if kind not in _LAYOUT:
        raise ValueError(f"Unknown observable kind: {kind}")
    if space.L < 3:
        raise ValueError(f"Kink observables need L >= 3, got L={space.L}")
    _, width = _LAYOUT[kind]
    return _occupations(space)[:, -width:].sum(axis=1)


def build_observable(
    kind: ObservableKind, space: Union[HilbertSpace, RydbergSpace], coeffs: Tuple[float, float]
) -> LinearOperator:
    """Kink detector ±α[1 − β Σ n_i] over the trailing sites.

    dn uses (n_{L-1} + n_L); dn3 and dnbar use (n_{L-2} + n_{L-1} + n_L), dnbar with an overall minus sign.
    """
    sign, _ = _LAYOUT.get(kind, (None, None))
    if sign is None:
        raise ValueError(f"Unknown observable kind: {kind}")
    alpha, beta = coeffs
    diag = sign * alpha * (1.0 - beta * edge_occupation(kind, space))
    return LinearOperator.diagonal(diag, space)


def fit_observable_coeffs(kind: ObservableKind, kink_basis) -> Tuple[float, float]:
    """Coefficients (α, β) such that the detector reads 0 on the leftmost and 1 on the rightmost kink.

    dn and dn3 are fitted on kinks, dnbar on skinks.
    """
    if kind == "dnbar":
        if kink_basis.skinks is None:
            raise ValueError("dnbar coefficients need skinks in the kink basis")
        space, states = kink_basis.skink_space, kink_basis.skinks
    else:
        space, states = kink_basis.space, kink_basis.kinks
    sign, _ = _LAYOUT[kind]
    occ = edge_occupation(kind, space)
    first = float(np.real(np.vdot(states[:, 0], occ * states[:, 0])))
    last = float(np.real(np.vdot(states[:, -1], occ * states[:, -1])))

    # unknowns (a, b) = (α, αβ): sign * (a - b <S>) = target
    system = sign * np.array([[1.0, -first], [1.0, -last]])
    rhs = np.array([0.0, 1.0])
    if abs(np.linalg.det(system)) < 1e-12:
        raise NumericalError(
            f"Observable {kind} is unfittable: edge occupations of first and last kink coincide ({first:.6f})"
        )
    a, b = np.linalg.solve(system, rhs)
    if abs(a) < 1e-14:
        raise NumericalError(f"Observable {kind} is unfittable: vanishing amplitude")
    return float(a), float(b / a)
