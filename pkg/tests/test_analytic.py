import math

import numpy as np
import pytest

from susykink.model import (
    V_FERMI,
    dispersion,
    gap_scaling,
    overlap_continuum,
    saddle_closed_form,
    saddle_overlap,
    scft_energy,
    v_max,
)

K = np.linspace(0.05, math.pi - 0.05, 41)


def test_critical_dispersion_is_sine():
    np.testing.assert_allclose(dispersion(1.0).energy(K), 2 * V_FERMI * np.sin(K / 2), atol=1e-12)
    # the general expression approaches the critical one continuously
    np.testing.assert_allclose(dispersion(1.0 - 1e-9).energy(K), 2 * V_FERMI * np.sin(K / 2), atol=1e-6)


def test_extreme_staggering_band_is_flat():
    np.testing.assert_allclose(dispersion(0.0).energy(K), 1.0, atol=1e-12)
    assert v_max(0.0) == 0.0


@pytest.mark.parametrize("lam", [0.2, 0.5, 0.9])
def test_velocity_and_curvature_are_derivatives(lam):
    disp = dispersion(lam)
    h = 1e-5
    numeric_v = (disp.energy(K + h) - disp.energy(K - h)) / (2 * h)
    np.testing.assert_allclose(disp.velocity(K), numeric_v, atol=1e-7)
    numeric_c = (disp.velocity(K + h) - disp.velocity(K - h)) / (2 * h)
    np.testing.assert_allclose(disp.curvature(K), numeric_c, atol=1e-7)


@pytest.mark.parametrize("lam", [0.2, 0.5, 1.0])
def test_gap_and_speed(lam):
    disp = dispersion(lam)
    assert disp.gap == pytest.approx(disp.energy(0.0), abs=1e-12)
    k_star = disp.k_of_max_velocity()
    assert disp.v_max >= disp.velocity(K).max() - 1e-9
    assert disp.velocity(k_star) == pytest.approx(disp.v_max)
    assert disp.kink_speed == pytest.approx(3 * disp.v_max)


def test_maximum_velocity_at_criticality():
    assert v_max(1.0) == pytest.approx(V_FERMI)
    assert v_max(0.5) < v_max(1.0)


def test_dispersion_range():
    with pytest.raises(ValueError):
        dispersion(1.2)


def test_saddle_estimate_tracks_band_sum():
    l = 101
    times = np.linspace(1.05, 5.0, 400) * l / V_FERMI
    continuum = np.abs(overlap_continuum(l, 1.0, times)) ** 2
    saddle = np.abs([saddle_overlap(l, 1.0, t) for t in times]) ** 2
    assert np.linalg.norm(saddle - continuum) / np.linalg.norm(continuum) < 0.05


def test_first_saddle_peak_position():
    l = 101
    times = np.linspace(0.5, 3.0, 20001) * (l + 2) / V_FERMI
    values = [saddle_closed_form(l, t) for t in times]
    peak = times[int(np.argmax(values))]
    assert peak == pytest.approx(math.sqrt(8 / 5) * (l + 2) / V_FERMI, rel=1e-2)


def test_first_saddle_closed_form_matches_estimate():
    l = 101
    t = 1.5 * (l + 2) / V_FERMI
    assert abs(saddle_overlap(l, 1.0, t, max_saddles=1)) == pytest.approx(saddle_closed_form(l, t), rel=1e-6)


def test_second_saddle_switches_on_at_three_crossings():
    l = 101
    onset = 3 * (l + 2) / V_FERMI
    before = 0.99 * onset
    after = 1.05 * onset
    assert saddle_overlap(l, 1.0, before, 2) == saddle_overlap(l, 1.0, before, 1)
    assert saddle_overlap(l, 1.0, after, 2) != saddle_overlap(l, 1.0, after, 1)
    assert saddle_overlap(l, 1.0, 0.9 * (l + 2) / V_FERMI) == 0


def test_gap_scaling_with_conformal_energies():
    assert scft_energy(13) == pytest.approx(1 / 3)
    assert scft_energy(12) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        scft_energy(11)
    assert gap_scaling(13) == pytest.approx(2 * math.pi / 3 * 3 * V_FERMI / 13)
    assert gap_scaling(28) == pytest.approx(gap_scaling(13) * 13 / 28)
    with pytest.raises(ValueError):
        gap_scaling(26)
