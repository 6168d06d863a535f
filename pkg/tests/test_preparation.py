import numpy as np
import pytest

from susykink.model import SweepProtocol, adiabatic_prepare, pinned_ground_state
from susykink.model.preparation import pinning_hamiltonian, product_state
from susykink.modules.hilbert import enumerate_space


@pytest.mark.parametrize("schedule", ["cosine", "smoothstep"])
def test_ramp_endpoints(schedule):
    protocol = SweepProtocol(schedule=schedule)
    assert protocol.ramp(0.0) == pytest.approx(0.0)
    assert protocol.ramp(protocol.T) == pytest.approx(1.0)
    assert protocol.ramp(protocol.T / 2) == pytest.approx(0.5)
    assert protocol.ramp(2 * protocol.T) == pytest.approx(1.0)


def test_protocol_validation():
    with pytest.raises(ValueError):
        SweepProtocol(T=1.0, dt=2.0)
    with pytest.raises(ValueError):
        SweepProtocol(T=-5.0)


def test_pinning_hamiltonian_ground_state_is_product_state():
    space = enumerate_space(9, 3)
    sites = [2, 5, 8]
    h_i = pinning_hamiltonian(space, sites, SweepProtocol())
    ground = np.argmin(h_i.matrix.diagonal())
    assert np.abs(product_state(space, sites))[ground] == 1.0
    with pytest.raises(ValueError):
        product_state(space, [1, 2, 5])


def test_pinned_kink_is_exact_at_extreme_staggering():
    pinned = pinned_ground_state(3, 0.0, "kink", 1)
    assert pinned.fidelity == pytest.approx(1.0, abs=1e-8)
    assert pinned.energy == pytest.approx(1.0, abs=1e-10)


def test_pinned_kink_at_criticality(critical_l4):
    pinned = pinned_ground_state(4, 1.0, "kink", 1, basis=critical_l4.basis)
    assert 0.9 < pinned.fidelity <= 1.0 + 1e-12
    assert pinned.energy >= critical_l4.basis.energies[0] - 1e-10


def test_skink_pinning_only_at_edges(critical_l3):
    with pytest.raises(ValueError):
        pinned_ground_state(3, 1.0, "skink", 2, basis=critical_l3.basis)


@pytest.mark.slow
@pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_adiabatic_kink_preparation(lam):
    result = adiabatic_prepare(SweepProtocol(), "kink", 4, lam)
    assert result.fidelity >= 0.95
    assert np.isclose(np.linalg.norm(result.state), 1.0)
    assert result.min_gap > 0


@pytest.mark.slow
@pytest.mark.parametrize("lam", [0.0, 0.5, 0.75, 1.0])
def test_adiabatic_skink_preparation(lam):
    result = adiabatic_prepare(SweepProtocol(), "skink", 4, lam)
    assert result.fidelity >= 0.93


@pytest.mark.slow
def test_longer_sweeps_do_not_hurt(critical_l4):
    short = adiabatic_prepare(SweepProtocol(T=50.0), "kink", 4, 1.0, basis=critical_l4.basis)
    long = adiabatic_prepare(SweepProtocol(T=150.0), "kink", 4, 1.0, basis=critical_l4.basis)
    assert long.fidelity >= short.fidelity - 1e-3


def test_unknown_target():
    with pytest.raises(ValueError):
        adiabatic_prepare(SweepProtocol(T=1.0, dt=0.5), "vacuum", 2, 1.0)


def test_bulk_kink_sweep_targets_requested_kink(extreme_l3):
    result = adiabatic_prepare(SweepProtocol(T=5.0, dt=0.05), "kink", 3, 0.0, basis=extreme_l3.basis, j=2)
    np.testing.assert_allclose(result.target, extreme_l3.basis.kink(2))
    assert result.state.shape == (result.space.dim,)
    assert 0.0 <= result.fidelity <= 1.0 + 1e-9


def test_kink_index_validation(critical_l3):
    with pytest.raises(ValueError):
        adiabatic_prepare(SweepProtocol(T=1.0, dt=0.5), "kink", 3, 1.0, basis=critical_l3.basis, j=5)
    with pytest.raises(ValueError):
        adiabatic_prepare(SweepProtocol(T=1.0, dt=0.5), "skink", 3, 1.0, basis=critical_l3.basis, j=2)
