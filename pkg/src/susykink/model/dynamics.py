"""Unitary time evolution: spectral propagation, Crank-Nicolson stepping and Rydberg-chain quenches."""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, Literal, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from tqdm import tqdm

from ..modules.dressing import PotentialDesign
from ..modules.hilbert import HilbertSpace, enumerate_rydberg, enumerate_space
from ..modules.operators import (
    DENSE_THRESHOLD,
    LinearOperator,
    RydbergParams,
    Staggering,
    build_hq,
    build_hq_dressed,
    build_observable,
    build_rydberg,
    neighbour_ground_pairs,
    rydberg_population,
)
from ..utils import DimensionLimitError, NumericalError
from .results import QuenchSeries, Spectrum
from .spectra import diagonalize

logger = logging.getLogger(__name__)

Hamiltonian = Union[LinearOperator, Callable[[float], LinearOperator]]
Method = Literal["eigen", "cn"]
RydbergVariant = Literal["full", "truncated_nnn", "hq_reference", "dressed_reference"]

# largest ‖H‖·dt for which a Crank-Nicolson step is considered accurate
CN_STEP_LIMIT = 0.1


def _record(
    psi: np.ndarray,
    observables: Mapping[str, LinearOperator],
    reference: Optional[np.ndarray],
) -> Tuple[Optional[complex], Dict[str, float], float]:
    overlap = None if reference is None else complex(np.vdot(reference, psi))
    values = {name: op.expectation(psi) for name, op in observables.items()}
    return overlap, values, float(np.linalg.norm(psi))


def _series(times, rows, observables, reference, psi, method) -> QuenchSeries:
    overlaps = np.array([r[0] for r in rows]) if reference is not None else None
    obs = {name: np.array([r[1][name] for r in rows]) for name in observables}
    norms = np.array([r[2] for r in rows])
    return QuenchSeries(
        times=np.asarray(times, dtype=float),
        overlap=overlaps,
        observables=obs,
        norms=norms,
        final_state=psi,
        metadata={"method": method},
    )


def _check_times(times: Sequence[float]) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d grid")
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-negative and non-decreasing")
    return times


def _propagate_eigen(state, H: LinearOperator, times, observables, reference, spectrum: Optional[Spectrum]):
    if spectrum is None:
        spectrum = diagonalize(H, "all")
    elif len(spectrum) != H.shape[0]:
        raise ValueError("Spectral propagation needs the complete spectrum")
    vecs, energies = spectrum.vectors, spectrum.energies
    coeffs = vecs.conj().T @ state
    rows = []
    psi = state
    for t in times:
        psi = vecs @ (np.exp(-1j * energies * t) * coeffs)
        rows.append(_record(psi, observables, reference))
    return _series(times, rows, observables, reference, psi, "eigen")


def _cn_factor(H: LinearOperator, dt: float):
    eye = sp.identity(H.shape[0], dtype=complex, format="csc")
    half = 0.5j * dt * H.matrix.tocsc()
    try:
        lu = spla.splu((eye + half).tocsc())
    except RuntimeError as exc:
        raise NumericalError(f"Crank-Nicolson factorization failed at dt={dt:.3e}: {exc}") from exc
    return lu, (eye - half).tocsr()


def _propagate_cn(state, H: Hamiltonian, times, observables, reference, dt, evaluation, progress):
    static = isinstance(H, LinearOperator)
    h0 = H if static else H(0.0)
    norm = max(h0.norm_bound(), 1e-12)
    if dt is None:
        dt = 0.01 / norm
    if dt * norm > CN_STEP_LIMIT:
        logger.warning(f"Crank-Nicolson step dt·‖H‖ = {dt * norm:.3f} exceeds {CN_STEP_LIMIT}")

    psi = np.asarray(state, dtype=complex).copy()
    rows = []
    t_now = 0.0
    cache: Dict[float, tuple] = {}
    bar = tqdm(total=float(times[-1]), disable=not progress, desc="cn", unit="t")
    for t_target in times:
        span = t_target - t_now
        steps = int(math.ceil(span / dt - 1e-9)) if span > 0 else 0
        if steps:
            h = span / steps
            for _ in range(steps):
                if static:
                    if h not in cache:
                        cache.clear()
                        cache[h] = _cn_factor(H, h)
                    lu, rhs = cache[h]
                else:
                    t_eval = t_now if evaluation == "left" else t_now + 0.5 * h
                    lu, rhs = _cn_factor(H(t_eval), h)
                psi = lu.solve(rhs @ psi)
                if not np.all(np.isfinite(psi)):
                    raise NumericalError(f"Crank-Nicolson step produced non-finite amplitudes at t={t_now:.4f}")
                t_now += h
            bar.update(span)
        rows.append(_record(psi, observables, reference))
    bar.close()
    series = _series(times, rows, observables, reference, psi, "cn")
    series.metadata.update({"dt": dt, "evaluation": evaluation})
    return series


def propagate(
    state: np.ndarray,
    H: Hamiltonian,
    times: Sequence[float],
    method: Method = "eigen",
    observables: Optional[Mapping[str, LinearOperator]] = None,
    reference: Optional[np.ndarray] = None,
    dt: Optional[float] = None,
    evaluation: Literal["left", "midpoint"] = "left",
    spectrum: Optional[Spectrum] = None,
    progress: bool = False,
) -> QuenchSeries:
    """Evolve ``state`` (given at t=0) and sample it on ``times``.

    ``eigen`` propagates exactly through the full spectrum of a static H. ``cn`` applies
    (1 + iHΔt/2)⁻¹(1 − iHΔt/2) per step, with H either static or a callable of time evaluated at
    the left end (default) or the midpoint of each step.
    """
    times = _check_times(times)
    observables = dict(observables or {})
    state = np.asarray(state, dtype=complex)
    if method not in ("eigen", "cn"):
        raise ValueError(f"Unknown propagation method: {method}")
    if dt is not None and dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if evaluation not in ("left", "midpoint"):
        raise ValueError(f"Unknown evaluation point: {evaluation}")
    if isinstance(H, LinearOperator):
        if not H.is_hermitian(1e-10):
            raise ValueError("propagate needs a Hermitian Hamiltonian")
        if state.shape != (H.shape[0],):
            raise ValueError(f"State of shape {state.shape} does not match H of shape {H.shape}")
    elif method == "eigen":
        raise ValueError("Spectral propagation needs a time-independent Hamiltonian")
    if abs(np.linalg.norm(state) - 1.0) > 1e-9:
        raise ValueError(f"Initial state must be normalized, norm is {np.linalg.norm(state):.12f}")

    if method == "eigen":
        return _propagate_eigen(state, H, times, observables, reference, spectrum)
    return _propagate_cn(state, H, times, observables, reference, dt, evaluation, progress)


def _mean_pairs(occ: np.ndarray) -> np.ndarray:
    return (occ[:, :-1] * occ[:, 1:]).sum(axis=1)


def rydberg_quench(
    params: RydbergParams,
    init: np.ndarray,
    init_space: HilbertSpace,
    times: Sequence[float],
    variants: Sequence[RydbergVariant] = ("full", "truncated_nnn", "hq_reference"),
    kind: str = "dn",
    coeffs: Tuple[float, float] = (1.0, 1.0),
    progress: bool = False,
) -> Dict[str, QuenchSeries]:
    """Quench a fermion state in the Rydberg-dressed chain and in its effective models.

    Times are in units of 1/J with J = ``params.J``. Each series carries the kink detector
    ``kind`` plus the mean Rydberg population and mean nearest-neighbour ground-state occupancy,
    both per kink (1/l).
    """
    L = params.L
    if init_space.L != L:
        raise ValueError(f"Initial state lives on L={init_space.L}, Rydberg chain has L={L}")
    if init_space.boundary != "open":
        raise ValueError("Rydberg quenches need an open chain")
    l = max((L - 1) // 3, 1)
    scaled = params.scaled()
    out: Dict[str, QuenchSeries] = {}

    for variant in tqdm(list(variants), disable=not progress, desc="rydberg"):
        if variant in ("full", "truncated_nnn"):
            space = enumerate_rydberg(L, init_space.n)
            if space.dim > DENSE_THRESHOLD:
                raise DimensionLimitError(
                    f"Rydberg space of dimension {space.dim} exceeds the solver limit {DENSE_THRESHOLD}"
                )
            chain = scaled if variant == "full" else scaled.truncated(2)
            H = build_rydberg(space, chain)
            psi0 = space.embed(init_space, init)
            observables = {
                kind: build_observable(kind, space, coeffs),
                "rydberg": rydberg_population(space) * (1.0 / l),
                "nn": neighbour_ground_pairs(space) * (1.0 / l),
            }
        elif variant == "hq_reference":
            space = init_space
            H = build_hq(space, Staggering(L=L, pattern="11l", lam=1.0))
            psi0 = np.asarray(init, dtype=complex)
            zeros = LinearOperator.diagonal(np.zeros(space.dim), space)
            observables = {kind: build_observable(kind, space, coeffs), "rydberg": zeros, "nn": zeros}
        elif variant == "dressed_reference":
            space = enumerate_space(L, init_space.n, constrained=False)
            design = PotentialDesign(layers=[scaled.layer()], r0=scaled.r0)
            H = build_hq_dressed(space, Staggering(L=L, pattern="11l", lam=1.0), design, range_cut=2)
            psi0 = np.zeros(space.dim, dtype=complex)
            psi0[space.index_of(init_space.states)] = init
            occ = space.occupations()
            observables = {
                kind: build_observable(kind, space, coeffs),
                "rydberg": LinearOperator.diagonal(np.zeros(space.dim), space),
                "nn": LinearOperator.diagonal(_mean_pairs(occ) / l, space),
            }
        else:
            raise ValueError(f"Unknown Rydberg quench variant: {variant}")

        logger.info(f"Rydberg quench variant {variant}: dimension {space.dim}")
        series = propagate(psi0, H, times, method="eigen", observables=observables)
        series.metadata.update({"variant": variant, "dimension": space.dim, "l": l})
        out[variant] = series
    return out
