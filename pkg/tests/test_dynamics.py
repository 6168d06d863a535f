import logging

import numpy as np
import pytest

from susykink import KinkSimulator
from susykink.model import diagonalize, propagate


@pytest.fixture(scope="module")
def small():
    sim = KinkSimulator(2, 0.8)
    return sim.hamiltonian(), sim.basis.kink(1)


def test_crank_nicolson_agrees_with_spectral(small):
    h, psi = small
    times = [0.0, 1.0, 2.0]
    exact = propagate(psi, h, times, method="eigen")
    cn = propagate(psi, h, times, method="cn", dt=2e-4)
    np.testing.assert_allclose(cn.final_state, exact.final_state, atol=1e-5)
    np.testing.assert_allclose(cn.norms, 1.0, atol=1e-10)


def test_midpoint_rule_for_time_dependent_hamiltonian(small):
    h, psi = small
    T = 2.0
    ramped = propagate(psi, lambda t: h * t, [T], method="cn", dt=5e-4, evaluation="midpoint")
    # H(t) = tH commutes with itself, so the state is e^{-iH T²/2}ψ
    exact = propagate(psi, h, [T**2 / 2], method="eigen")
    np.testing.assert_allclose(ramped.final_state, exact.final_state, atol=1e-4)


def test_observables_and_reference_are_recorded(small):
    h, psi = small
    series = propagate(psi, h, np.linspace(0, 1, 5), observables={"energy": h}, reference=psi)
    assert series.overlap[0] == pytest.approx(1.0)
    np.testing.assert_allclose(series.observables["energy"], h.expectation(psi), atol=1e-10)


def test_spectrum_reuse(small):
    h, psi = small
    spec = diagonalize(h, "all")
    a = propagate(psi, h, [0.5], spectrum=spec)
    b = propagate(psi, h, [0.5])
    np.testing.assert_allclose(a.final_state, b.final_state, atol=1e-12)
    with pytest.raises(ValueError):
        propagate(psi, h, [0.5], spectrum=diagonalize(h, 2))


def test_large_step_warns(small, caplog):
    h, psi = small
    with caplog.at_level(logging.WARNING):
        propagate(psi, h, [1.0], method="cn", dt=0.5)
    assert "exceeds" in caplog.text


@pytest.mark.parametrize(
    "kwargs",
    [
        {"times": [1.0, 0.5]},
        {"times": [-1.0]},
        {"times": [1.0], "method": "rk4"},
        {"times": [1.0], "method": "cn", "dt": -0.1},
        {"times": [1.0], "state_scale": 2.0},
    ],
)
def test_invalid_propagation_requests(small, kwargs):
    h, psi = small
    kwargs = dict(kwargs)
    psi = psi * kwargs.pop("state_scale", 1.0)
    with pytest.raises(ValueError):
        propagate(psi, h, **kwargs)


def test_spectral_method_needs_static_hamiltonian(small):
    h, psi = small
    with pytest.raises(ValueError):
        propagate(psi, lambda t: h, [1.0], method="eigen")
