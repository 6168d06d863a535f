import math

import numpy as np
import pytest

from susykink.modules.dressing import (
    LATTICE_SPACING_UM,
    SECONDARY_C6,
    SECONDARY_DETUNING,
    DressingLayer,
    PotentialDesign,
    double_dressing,
    far_tail_ratio,
    fredholm_design,
    lithium_84s,
    mhz,
    offcritical_patterns,
    target_profile,
    tradeoff_ratios,
    two_atom_oracle,
)

R0 = LATTICE_SPACING_UM


def test_primary_dressing_anchors():
    layer = lithium_84s()
    w = layer.potential(np.array([1.0, 2.0, 3.0]) * R0)
    assert w[1] == pytest.approx(4.0e3, abs=0.2e3)
    assert w[0] / w[1] == pytest.approx(21.0, rel=0.05)
    assert w[1] / w[2] == pytest.approx(11.0, rel=0.05)
    # plateau at short distance
    assert layer.potential(0.1) == pytest.approx(layer.amplitude, rel=1e-6)


@pytest.mark.parametrize(
    "state, anchors",
    [("74D", (1014.7, 73.75, 94.09)), ("84D", (2377.0, 34.71, 56.18))],
)
def test_double_dressing_anchors(state, anchors):
    design = double_dressing(lithium_84s(), SECONDARY_DETUNING, SECONDARY_C6[state], R0)
    w = design.at_spacing(np.array([1, 2, 3]))
    w2, near, far = anchors
    assert w[1] == pytest.approx(w2, rel=0.05)
    assert w[0] / w[1] == pytest.approx(near, rel=0.05)
    assert w[1] / w[2] == pytest.approx(far, rel=0.05)


def test_secondary_rabi_frequency():
    design = double_dressing(lithium_84s(), SECONDARY_DETUNING, SECONDARY_C6["74D"], R0)
    secondary = design.layers[1]
    assert secondary.Omega / mhz(1.0) == pytest.approx(4.5, abs=0.1)
    # the r⁻⁶ tails cancel at large distance
    assert abs(design.total(40 * R0)) < 1e-3 * abs(design.layers[0].potential(40 * R0))


def test_double_dressing_needs_attractive_secondary():
    with pytest.raises(ValueError):
        double_dressing(lithium_84s(), SECONDARY_DETUNING, 1e12, R0)
    with pytest.raises(ValueError):
        double_dressing(lithium_84s(), 5e8, SECONDARY_C6["74D"], R0)


def test_two_atom_levels_converge_to_closed_form():
    delta = mhz(100.0)
    errors = []
    for ratio in (0.04, 0.02):
        layer = DressingLayer(Omega=ratio * delta, Delta=delta, C6=645e9)
        levels = two_atom_oracle(layer, 2 * R0)
        errors.append(abs(levels.exact_shift - levels.closed_form_shift) / abs(levels.closed_form_shift))
        assert levels.closed_form_shift == pytest.approx(levels.perturbative, rel=0.05)
    slope = math.log(errors[0] / errors[1]) / math.log(2.0)
    assert slope == pytest.approx(2.0, abs=0.1)


def test_resonant_layer_has_no_radius():
    layer = DressingLayer(Omega=1.0, Delta=-10.0, C6=1.0)
    with pytest.raises(ValueError):
        _ = layer.rho


def test_target_profile_steps():
    np.testing.assert_allclose(target_profile([1, 2, 3, 6], 100.0), [100.0, 1.0, 0.01, 0.01 / 64])


def test_fredholm_design_solves_square_system():
    design = fredholm_design(1e3, rho_grid=[0.2, 0.5, 0.9, 1.5], fit_points=[1, 2, 3, 4])
    assert design.diagnostics["rank"] == 4
    target = target_profile(np.arange(1, 5), 1e3)
    fitted = design.at_spacing(np.arange(1, 5))
    assert np.linalg.norm(fitted - target) / np.linalg.norm(target) < 1e-6
    assert design.r0 == 1.0


def test_fredholm_default_diagnostics():
    design = fredholm_design(1e3)
    diag = design.diagnostics
    assert 2 <= diag["rank"] <= 8
    assert len(diag["singular_values"]) == 8
    assert diag["residual_norm"] >= diag["truncation_estimate"] - 1e-9


@pytest.mark.xfail(reason="far-tail value depends strongly on the radii grid", strict=False)
def test_fredholm_far_tail_is_strongly_suppressed():
    design = fredholm_design(1e3)
    assert abs(far_tail_ratio(design)) > 1e3


def test_fredholm_validation():
    with pytest.raises(ValueError):
        fredholm_design(-1.0)
    with pytest.raises(ValueError):
        fredholm_design(1e3, fit_points=[1, 1, 2])


def test_tradeoff_ratios():
    layer = lithium_84s()
    ratios = tradeoff_ratios(layer, gamma0=1 / 8.6e-3, r0=R0)
    assert ratios.tail_ratio == pytest.approx(1 / 11.0, rel=0.05)
    w2 = layer.potential(2 * R0)
    assert ratios.scatter_per_hop == pytest.approx((1 / 8.6e-3) * 0.01 / w2)


def test_offcritical_patterns():
    crit = offcritical_patterns(1.0, 10)
    np.testing.assert_allclose(crit.hopping, 1.0)
    np.testing.assert_allclose(crit.mu[1:-1], -2.0)
    assert crit.mu[0] == crit.mu[-1] == -1.0
    assert crit.constant == 10.0
    half = offcritical_patterns(0.5, 7)
    np.testing.assert_allclose(half.hopping, [1, 0.5, 0.5, 1, 0.5, 0.5])
    np.testing.assert_allclose(half.rabi, [0.5, 0.5, 1, 0.5, 0.5, 1, 0.5])


def test_empty_design_is_zero():
    assert PotentialDesign().total(3.0) == 0.0
