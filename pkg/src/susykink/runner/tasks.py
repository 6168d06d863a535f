"""Table builders behind every CLI command."""

from __future__ import annotations

import logging
import math
import time
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..core import KinkSimulator
from ..model import (
    V_FERMI,
    BudgetParams,
    SweepProtocol,
    adiabatic_prepare,
    budget_table,
    cft_densities,
    coherence_budget,
    dispersion,
    ground_state_densities,
    max_slope_lambda,
    overlap_continuum,
    pinned_ground_state,
    rydberg_quench,
    saddle_closed_form,
    saddle_overlap,
    susy_pairing_report,
    tail_fidelity,
)
from ..modules.dressing import (
    LATTICE_SPACING_UM,
    SECONDARY_C6,
    SECONDARY_DETUNING,
    DressingLayer,
    PotentialDesign,
    double_dressing,
    far_tail_ratio,
    fredholm_design,
    lithium_84s,
    target_profile,
)
from ..modules.hilbert import enumerate_space
from ..modules.operators import RydbergParams, Staggering
from .artifacts import code_version
from .config import DressingSection, RunConfig, build_run_config
from .state import ResultBundle, Table
from .tracker import RunTracker

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def _times(t_max: float, n: int) -> np.ndarray:
    return np.linspace(0.0, t_max, n)


# ------------------------------------------------------------------ #
# Spectra and densities
# ------------------------------------------------------------------ #
def run_spectrum(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    m = config.model
    L = m.chain_length()
    stagger = Staggering(L=L, pattern=m.pattern, offset=m.offset, lam=m.lam)
    report = susy_pairing_report(L, stagger, boundary=m.boundary, sectors=m.sectors)
    bundle = ResultBundle(config.command)
    spectrum = bundle.add(Table("spectrum", ["n", "index", "energy"], ["-", "-", "J"]))
    for n, energies in sorted(report.spectra.items()):
        for idx, e in enumerate(energies):
            spectrum.add_row(n, idx, float(e))
    pairing = bundle.add(Table("pairing", ["n", "dimension", "zero_modes", "unmatched"], ["-", "-", "-", "-"]))
    for n, energies in sorted(report.spectra.items()):
        pairing.add_row(n, energies.size, report.zero_modes[n], report.unmatched[n].size)
    bundle.metadata["residuals"] = {"nilpotency": report.nilpotency}
    bundle.metadata["witten_count"] = report.witten_count
    tracker.log_metrics({"L": L, "witten_count": report.witten_count, "nilpotency": report.nilpotency}, "spectrum")
    return bundle


def run_densities(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    m = config.model
    exact = ground_state_densities(m.l, m.lam)
    cft = cft_densities(3 * m.l, x_offset=1)
    bundle = ResultBundle(config.command)
    table = bundle.add(Table("densities", ["site", "n_exact", "n_cft", "h_exact"], ["-", "-", "-", "J"]))
    table.add_columns(exact.sites, exact.site_densities, cft.site_densities, exact.energy_densities)
    deviation = float(np.nanmax(np.abs(exact.site_densities - cft.site_densities)))
    bundle.metadata["max_cft_deviation"] = deviation
    tracker.log_metrics({"l": m.l, "lambda": m.lam, "max_cft_deviation": deviation}, "densities")
    return bundle


def run_kink_profile(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    m = config.model
    sim = KinkSimulator(m.l, m.lam)
    kink = sim.profile(m.j)
    skink = sim.profile(m.j, skink=True)
    bundle = ResultBundle(config.command)
    table = bundle.add(
        Table("profile", ["site", "n_kink", "h_kink", "n_skink", "h_skink"], ["-", "-", "J", "-", "J"])
    )
    table.add_columns(kink.sites, kink.site_densities, kink.energy_densities, skink.site_densities, skink.energy_densities)
    pinned = pinned_ground_state(m.l, m.lam, "kink", m.j, basis=sim.basis)
    pinned_profile = (np.abs(pinned.vector) ** 2) @ pinned.space.occupations()
    table.columns.append("n_pinned")
    table.units.append("-")
    for row, value in zip(table.rows, pinned_profile):
        row.append(float(value))
    bundle.metadata["pinned_fidelity"] = pinned.fidelity
    bundle.metadata["band_energies"] = sim.basis.energies.tolist()
    tracker.log_metrics({"l": m.l, "lambda": m.lam, "j": m.j}, "kink-profile")
    return bundle


def run_coefficients(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    m = config.model
    bundle = ResultBundle(config.command)
    table = bundle.add(Table("coefficients", ["l", "kind", "alpha", "beta"], ["-", "-", "-", "-"]))
    for l in tqdm(m.ls, desc="coefficients"):
        sim = KinkSimulator(l, m.lam)
        for kind in ("dn", "dn3", "dnbar"):
            alpha, beta = sim.observable_coeffs(kind)
            table.add_row(l, kind, alpha, beta)
    tracker.log_metrics({"lambda": m.lam, "sizes": len(m.ls)}, "coefficients")
    return bundle


# ------------------------------------------------------------------ #
# Dynamics
# ------------------------------------------------------------------ #
def run_quench(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    m, d = config.model, config.dynamics
    sim = KinkSimulator(m.l, m.lam)
    times = _times(d.t_max, d.n_times)
    closed = sim.overlap(times)
    prefix = d.init.split("-")[0]
    kink = sim.quench(times, f"{prefix}-kink", d.observable, d.method, d.dt)
    skink = sim.quench(times, f"{prefix}-skink", "dnbar", d.method, d.dt)
    velocity = sim.velocity
    bundle = ResultBundle(config.command)
    table = bundle.add(
        Table(
            "quench",
            ["t_J", "t_vF_over_l", "overlap_sq", "overlap_sq_propagated", d.observable, "skink_overlap_sq", "dnbar"],
            ["-", "-", "-", "-", "-", "-", "-"],
        )
    )
    table.add_columns(
        times,
        times * velocity / m.l,
        closed.overlap_sq,
        kink.overlap_sq,
        kink.observables[d.observable],
        skink.overlap_sq,
        skink.observables["dnbar"],
    )
    drift = float(max(np.max(np.abs(kink.norms - 1)), np.max(np.abs(skink.norms - 1))))
    bundle.metadata["residuals"] = {"norm_drift": drift}
    bundle.metadata["coefficients"] = {k: sim.observable_coeffs(k) for k in (d.observable, "dnbar")}
    tracker.log_metrics({"l": m.l, "lambda": m.lam, "norm_drift": drift}, "quench")
    return bundle


def run_saddle(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    m, d = config.model, config.dynamics
    velocity = V_FERMI if m.lam == 1.0 else dispersion(m.lam).v_max
    times = _times(d.t_max, d.n_times)
    scaled = times * velocity / m.l
    continuum = overlap_continuum(m.l, m.lam, times)
    saddle = np.array([saddle_overlap(m.l, m.lam, t, d.max_saddles) for t in tqdm(times, desc="saddle")])
    bundle = ResultBundle(config.command)
    columns = ["t", "t_vF_over_l", "continuum_sq", "saddle_sq"]
    units = ["1/J", "-", "-", "-"]
    arrays = [times, scaled, np.abs(continuum) ** 2, np.abs(saddle) ** 2]
    if m.lam == 1.0:
        columns.append("first_saddle_closed_sq")
        units.append("-")
        arrays.append(np.array([saddle_closed_form(m.l, t) ** 2 for t in times]))
    table = bundle.add(Table("saddle", columns, units))
    table.add_columns(*arrays)
    tracker.log_metrics({"l": m.l, "lambda": m.lam, "max_saddles": d.max_saddles}, "saddle")
    return bundle


def run_dispersion(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    m = config.model
    bundle = ResultBundle(config.command)
    curves = bundle.add(Table("curves", ["lambda", "k", "energy", "velocity"], ["-", "-", "J", "J"]))
    k = np.linspace(0.0, math.pi, 201)
    for lam in m.lams:
        disp = dispersion(lam)
        for kk, e, v in zip(k, disp.energy(k), disp.velocity(k)):
            curves.add_row(lam, kk, e, v)

    exact = bundle.add(Table("exact", ["lambda", "k", "energy"], ["-", "-", "J"]))
    for lam in tqdm(m.lams, desc="exact band"):
        basis = KinkSimulator(m.l, lam).basis
        for kk, e in zip(basis.k_tilde, basis.energies):
            exact.add_row(lam, kk, e)

    inset = bundle.add(Table("inset", ["lambda", "gap", "v_max", "kink_speed"], ["-", "J", "J", "sites*J"]))
    for lam in np.linspace(0.0, 1.0, 51):
        disp = dispersion(lam)
        inset.add_row(float(lam), disp.gap, disp.v_max, disp.kink_speed)
    tracker.log_metrics({"lambdas": len(m.lams)}, "dispersion")
    return bundle


def run_prepare(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    m, p = config.model, config.preparation
    protocol = SweepProtocol(T=p.T, dt=p.prep_dt, schedule=p.schedule, projection=p.projection)
    bundle = ResultBundle(config.command)
    table = bundle.add(
        Table("preparation", ["lambda", "T", "fidelity", "pinned_fidelity", "min_gap"], ["-", "1/J", "-", "-", "J"])
    )
    for lam in tqdm(p.prep_lams, desc=f"prepare {p.target}"):
        basis = None if p.target == "gs" else KinkSimulator(m.l, lam).basis
        result = adiabatic_prepare(protocol, p.target, m.l, lam, basis=basis, j=m.j)
        pinned = float("nan")
        if p.target != "gs":
            pinned = pinned_ground_state(m.l, lam, p.target, m.j, protocol, basis).fidelity
        for message in result.warnings:
            tracker.warn(message)
        table.add_row(lam, p.T, result.fidelity, pinned, result.min_gap)
        tracker.log_metrics({"lambda": lam, "fidelity": result.fidelity, "min_gap": result.min_gap}, "prepare")
    return bundle


def _rydberg_params(config: RunConfig) -> RydbergParams:
    r = config.rydberg
    layer = DressingLayer(Omega=TWO_PI * r.Omega, Delta=TWO_PI * r.Omega * r.delta_ratio, C6=r.C6)
    return RydbergParams.from_layer(layer, r.sites, r.r0)


def run_rydberg_quench(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    r = config.rydberg
    params = _rydberg_params(config)
    l = (r.sites - 1) // 3
    if r.sites != 3 * l + 1 or r.atoms not in (l, l + 1):
        raise ValueError(f"Rydberg quench needs sites = 3l+1 and atoms in (l, l+1), got {r.sites}, {r.atoms}")
    sim = KinkSimulator(l, 1.0)
    skink = r.atoms == l + 1
    kind = "dnbar" if skink else "dn"
    if r.rydberg_init == "pinned":
        init = pinned_ground_state(l, 1.0, "skink" if skink else "kink", 1, basis=sim.basis).vector
    else:
        init = sim.basis.skink(1) if skink else sim.basis.kink(1)
    space = enumerate_space(r.sites, r.atoms)
    times = _times(r.rydberg_t_max, r.rydberg_n_times)
    series = rydberg_quench(
        params, init, space, times, variants=r.variants, kind=kind, coeffs=sim.observable_coeffs(kind), progress=True
    )
    bundle = ResultBundle(config.command)
    columns, units, arrays = ["t_J", "t_vF_over_l"], ["-", "-"], [times, times * V_FERMI / l]
    for variant, s in series.items():
        for name, values in s.observables.items():
            columns.append(f"{variant}_{name}")
            units.append("-")
            arrays.append(values)
    table = bundle.add(Table("rydberg", columns, units))
    table.add_columns(*arrays)
    bundle.metadata["J_hz"] = params.J
    bundle.metadata["initial_state"] = f"{r.rydberg_init}-{'skink' if skink else 'kink'}"
    bundle.metadata["dimensions"] = {v: s.metadata["dimension"] for v, s in series.items()}
    tracker.log_metrics({"J_hz": params.J, "variants": len(series)}, "rydberg-quench")
    return bundle


# ------------------------------------------------------------------ #
# Dressing and budget
# ------------------------------------------------------------------ #
def _design(d: DressingSection, mode: Optional[str] = None) -> PotentialDesign:
    mode = mode or d.mode
    primary = lithium_84s()
    if mode == "single":
        return PotentialDesign(layers=[primary])
    if mode == "double":
        # the secondary detuning is quoted as an angular frequency
        return double_dressing(primary, SECONDARY_DETUNING, SECONDARY_C6[d.secondary], LATTICE_SPACING_UM)
    return fredholm_design(d.suppression, rcond=d.rcond)


def run_design_potential(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    d = config.dressing
    design = _design(d)
    bundle = ResultBundle(config.command)
    n = np.union1d(np.linspace(0.5, d.n_max, d.r_points), np.arange(1, d.n_max + 1))
    layers = design.layer_potentials(n * design.r0)
    w2 = design.at_spacing(2)
    # the target is only defined at whole lattice spacings
    on_site = np.isclose(n, np.round(n))
    target = np.where(on_site, target_profile(np.round(n), d.suppression) * w2, np.nan)
    columns = ["r_over_r0"] + [f"W_layer{i + 1}" for i in range(len(layers))] + ["W_tot", "W_target"]
    unit = "Hz" if design.layers else "arb"
    table = bundle.add(Table("potential", columns, ["-"] + [unit] * (len(layers) + 2)))
    table.add_columns(n, *layers, design.at_spacing(n), target)

    spacings = np.arange(1, d.n_max + 1)
    sites = bundle.add(Table("spacings", ["n", "W_over_W2", "target_over_W2"], ["-", "-", "-"]))
    sites.add_columns(spacings, design.at_spacing(spacings) / w2, target_profile(spacings, d.suppression))

    summary = {
        "W_2r0": design.at_spacing(2),
        "ratio_r0_2r0": design.at_spacing(1) / design.at_spacing(2),
        "ratio_2r0_3r0": design.at_spacing(2) / design.at_spacing(3),
        "far_tail_ratio": far_tail_ratio(design, d.n_max),
    }
    if len(design.layers) > 1:
        summary["secondary_Omega_over_2pi_mhz"] = design.layers[1].Omega / TWO_PI / 1e6
    anchors = bundle.add(Table("anchors", ["quantity", "value"], ["-", "-"]))
    for key, value in summary.items():
        anchors.add_row(key, float(value))
    bundle.metadata["diagnostics"] = design.diagnostics
    tracker.log_metrics(summary, "design-potential")
    return bundle


def run_tail_fidelity(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    m, d = config.model, config.dressing
    bundle = ResultBundle(config.command)
    fidelity = bundle.add(Table("fidelity", ["scheme", "l", "lambda", "fidelity"], ["-", "-", "-", "-"]))
    slopes = bundle.add(Table("max_slope", ["scheme", "l", "lambda_max_slope"], ["-", "-", "-"]))
    critical = bundle.add(Table("error_at_criticality", ["scheme", "l", "one_minus_fidelity"], ["-", "-", "-"]))
    for scheme in d.schemes:
        design = _design(d, scheme)
        for l in tqdm(m.ls, desc=f"tails {scheme}"):
            lam_star, fids = max_slope_lambda(l, m.lams, design, d.range_cut)
            for lam, f in zip(m.lams, fids):
                fidelity.add_row(scheme, l, lam, float(f))
            slopes.add_row(scheme, l, lam_star)
            at_one = float(fids[-1]) if m.lams[-1] == 1.0 else tail_fidelity(l, 1.0, design, d.range_cut)
            critical.add_row(scheme, l, 1.0 - at_one)
            tracker.log_metrics({"l": l, "lambda_max_slope": lam_star, "error": 1.0 - at_one}, f"tail-fidelity {scheme}")
    return bundle


def run_budget(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    b = config.budget
    base = BudgetParams(kappa=b.kappa, lam=config.model.lam)
    rows = budget_table(b.delta_ratios, b.tau0s, base)
    bundle = ResultBundle(config.command)
    table = bundle.add(
        Table("budget", ["lifetime", "tau0", "delta_over_omega", "J", "L_max"], ["-", "s", "-", "Hz", "sites"])
    )
    for row in rows:
        table.add_row(row["lifetime"], row["tau0"], row["delta_over_omega"], row["J"], row["L_max"])
    reference = coherence_budget(BudgetParams(kappa=0.0))
    bundle.metadata["reference_L_max"] = reference
    tracker.log_metrics({"reference_L_max": reference, "rows": len(rows)}, "budget")
    return bundle


# ------------------------------------------------------------------ #
# Figure bundles
# ------------------------------------------------------------------ #
# λ grid of the tail-fidelity curves
TAIL_LAMS = [round(0.05 * k, 2) for k in range(1, 21)]

FIGURES: Dict[str, List[Tuple[str, List[str]]]] = {
    "1b": [("densities", ["l=6", "lambda=1"])],
    "1c": [("kink-profile", ["l=4", "lambda=1", "j=1"]), ("kink-profile", ["l=4", "lambda=0", "j=1"])],
    "2a": [("spectrum", ["L=13", "lambda=1"])],
    "2b": [("dispersion", ["l=4", "lams=[0.1, 0.5, 1.0]"])],
    "3a": [("quench", ["l=4", "lambda=1", "init=exact-kink"]), ("quench", ["l=4", "lambda=1", "init=pinned-kink"])],
    "3b": [("saddle", ["l=101", "lambda=1", "t_max=470", "n_times=600"])],
    "3c": [("rydberg-quench", ["atoms=3"]), ("rydberg-quench", ["atoms=4"])],
    "S1": [
        ("kink-profile", ["l=3", f"lambda={lam}", f"j={j}"]) for lam in (0, 1) for j in (1, 2, 4)
    ],
    "S2": [
        ("coefficients", ["ls=[2, 3, 4, 5]", "lambda=1"]),
        ("quench", ["l=3", "lambda=1", "observable=dn"]),
        ("quench", ["l=3", "lambda=1", "observable=dn3"]),
    ],
    "S3": [("prepare", ["l=4", "target=kink"]), ("prepare", ["l=4", "target=gs"])],
    "S4": [("tail-fidelity", ["ls=[2, 3, 4, 5, 6]", f"lams={TAIL_LAMS}"])],
    "S5": [("design-potential", ["mode=single"]), ("design-potential", ["mode=double", "secondary=74D"])],
    "S6": [("design-potential", ["mode=fredholm", "suppression=1000"])],
    "S7": [("budget", [])],
}


def run_figures(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    fig = config.output.fig
    names = list(FIGURES) if fig == "all" else [fig]
    unknown = [n for n in names if n not in FIGURES]
    if unknown:
        raise ValueError(f"Unknown figure {unknown[0]!r}; choose from {sorted(FIGURES)} or 'all'")
    bundle = ResultBundle(config.command)
    for name in tqdm(names, desc="figures"):
        for idx, (command, overrides) in enumerate(FIGURES[name]):
            sub = build_run_config(command, overrides=overrides)
            part = TASKS[command](sub, tracker)
            bundle.merge(part, f"fig{name}_{idx}")
    return bundle


TASKS: Dict[str, Callable[[RunConfig, RunTracker], ResultBundle]] = {
    "spectrum": run_spectrum,
    "densities": run_densities,
    "kink-profile": run_kink_profile,
    "coefficients": run_coefficients,
    "quench": run_quench,
    "saddle": run_saddle,
    "dispersion": run_dispersion,
    "prepare": run_prepare,
    "rydberg-quench": run_rydberg_quench,
    "design-potential": run_design_potential,
    "tail-fidelity": run_tail_fidelity,
    "budget": run_budget,
    "figures": run_figures,
}


def run(config: RunConfig, tracker: RunTracker) -> ResultBundle:
    """Dispatch one validated configuration and attach provenance metadata."""
    start = time.time()
    bundle = TASKS[config.command](config, tracker)
    bundle.metadata.update(
        {
            "config": config.echo(),
            "code_version": code_version(),
            "wall_time": time.time() - start,
            "warnings": list(tracker.warnings),
        }
    )
    tracker.done(config.command, f"finished in {bundle.metadata['wall_time']:.2f}s")
    return bundle
