import numpy as np
import pytest

from susykink.model import (
    cft_densities,
    diagonalize,
    extract_kink_band,
    gauged_bare_kinks,
    ground_state_densities,
    kink_basis,
    susy_pairing_report,
    track_kink_band,
)
from susykink.modules.hilbert import enumerate_space
from susykink.modules.operators import Staggering, build_hq


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.7, 1.0])
def test_kink_sector_levels_have_superpartners(lam):
    L = 13
    stagger = Staggering(L=L, lam=lam)
    report = susy_pairing_report(L, stagger, sectors=[3, 4, 5])
    assert report.nilpotency < 1e-12
    levels = report.spectra[4]
    nonzero = levels[levels > 1e-9]
    partnered = report.matched_in(nonzero, 3) | report.matched_in(nonzero, 5)
    assert partnered.all()
    assert report.unmatched[4].size == 0


@pytest.mark.parametrize("l", [2, 3, 4, 5])
def test_extreme_staggering_kink_manifold(l):
    stagger = Staggering.kink_chain(l, 0.0)
    space = enumerate_space(stagger.L, l)
    energies = diagonalize(build_hq(space, stagger), l + 2).energies
    np.testing.assert_allclose(energies[: l + 1], 1.0, atol=1e-10)
    assert energies[l + 1] - energies[l] == pytest.approx(2.0, abs=1e-8)


@pytest.mark.parametrize("L", [6, 9, 12])
def test_periodic_ring_has_two_zero_modes(L):
    report = susy_pairing_report(L, Staggering(L=L), boundary="periodic")
    assert report.witten_count == 2
    assert report.zero_modes[L // 3] == 2


def test_ground_chain_has_unique_zero_mode():
    stagger = Staggering.ground_chain(3, 0.5)
    energies = diagonalize(build_hq(enumerate_space(stagger.L, 3), stagger), 2).energies
    assert abs(energies[0]) < 1e-10
    assert energies[1] > 1e-3


def test_kink_band_extraction(critical_l4):
    basis = critical_l4.basis
    assert basis.separated
    assert np.all(np.diff(basis.energies) > 0)
    np.testing.assert_allclose(basis.kinks.T @ basis.kinks, np.eye(5), atol=1e-10)
    np.testing.assert_allclose(basis.skinks.T @ basis.skinks, np.eye(5), atol=1e-10)


def test_kink_band_needs_enough_states():
    stagger = Staggering.kink_chain(2, 1.0)
    spec = diagonalize(build_hq(enumerate_space(stagger.L, 2), stagger), 2)
    with pytest.raises(ValueError):
        extract_kink_band(spec, 2, 1.0)


def test_kink_band_follows_bare_kinks_through_level_crossings(critical_l4):
    basis = critical_l4.basis
    # an intruder level at E=1.723 sits inside the band at λ=1
    np.testing.assert_array_equal(basis.band_indices, [0, 1, 2, 4, 7])
    np.testing.assert_allclose(basis.energies, [0.2573, 0.9953, 1.6406, 2.1424, 2.4605], atol=1e-3)
    overlaps = np.abs(gauged_bare_kinks(basis.space, 4).T @ basis.kinks)
    np.testing.assert_array_equal(np.argmax(overlaps, axis=0), np.arange(5))


def test_band_tracking_starts_on_bare_manifold():
    np.testing.assert_array_equal(track_kink_band(3, 0.0), np.arange(4))
    with pytest.raises(ValueError):
        track_kink_band(3, 1.5)
    with pytest.raises(ValueError):
        track_kink_band(3, 1.0, window=3)


def test_kink_basis_matches_simulator(critical_l4):
    basis = kink_basis(4, 1.0, with_skinks=False)
    np.testing.assert_array_equal(basis.band_indices, critical_l4.basis.band_indices)
    np.testing.assert_allclose(basis.energies, critical_l4.basis.energies, atol=1e-10)
    np.testing.assert_allclose(np.abs(basis.kinks.T @ critical_l4.basis.kinks), np.eye(5), atol=1e-8)


def test_kink_band_beyond_spectrum_is_rejected():
    stagger = Staggering.kink_chain(4, 1.0)
    spec = diagonalize(build_hq(enumerate_space(stagger.L, 4), stagger), 6)
    with pytest.raises(ValueError):
        extract_kink_band(spec, 4, 1.0)


def test_ground_state_densities_follow_cft():
    l = 6
    exact = ground_state_densities(l, 1.0)
    assert exact.site_densities.sum() == pytest.approx(l)
    cft = cft_densities(3 * l, x_offset=1)
    defined = ~np.isnan(cft.site_densities)
    assert defined.sum() >= 3 * l - 1
    deviation = np.abs(exact.site_densities - cft.site_densities)[defined]
    assert deviation.max() < 0.05
    means = exact.family_means()
    # families 3j-2 and 3j map onto each other under reflection of the chain
    assert means[0] == pytest.approx(means[2], abs=1e-9)
    assert abs(means[1] - means[0]) > 0.02


def test_energy_densities_vanish_in_zero_mode():
    profile = ground_state_densities(4, 0.7)
    assert abs(profile.energy_densities.sum()) < 1e-9


def test_cft_profile_needs_multiple_of_three():
    with pytest.raises(ValueError):
        cft_densities(10)


def test_cft_site_offset():
    plain = cft_densities(18)
    assert np.isnan(plain.site_densities[0])
    assert not np.isnan(plain.site_densities[1:]).any()
    shifted = cft_densities(18, x_offset=1)
    assert not np.isnan(shifted.site_densities).any()
    np.testing.assert_allclose(shifted.site_densities, shifted.site_densities[::-1], atol=1e-12)


def test_weak_staggering_kinks_stay_bare():
    basis = kink_basis(3, 1e-4)
    overlaps = np.abs(np.diag(gauged_bare_kinks(basis.space, 3).T @ basis.kinks))
    assert overlaps.min() > 0.999
