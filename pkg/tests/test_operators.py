from types import SimpleNamespace

import numpy as np
import pytest
import scipy.sparse as sp

from susykink import DimensionLimitError
from susykink.modules.dressing import lithium_84s
from susykink.modules.hilbert import enumerate_rydberg, enumerate_space
from susykink.modules.operators import (
    LinearOperator,
    RydbergParams,
    Staggering,
    build_hq,
    build_hq_dressed,
    build_local_energies,
    build_observable,
    build_rydberg,
    build_supercharge,
    interaction_matrix,
    number_operator,
    rydberg_population,
)


def test_staggering_vector():
    stagger = Staggering.kink_chain(2, 0.5)
    np.testing.assert_allclose(stagger.vector(), [1, 1, 0.5, 1, 1, 0.5, 1])
    ground = Staggering.ground_chain(2, 0.5)
    np.testing.assert_allclose(ground.vector(), [1, 0.5, 1, 1, 0.5, 1])
    assert Staggering(L=4, **{"lambda": 0.3}).lam == 0.3


@pytest.mark.parametrize("kwargs", [{"pattern": "111"}, {"pattern": "1l"}, {"offset": 3}, {"lam": 1.5}])
def test_staggering_rejects_bad_input(kwargs):
    with pytest.raises(ValueError):
        Staggering(L=7, **kwargs)


@pytest.mark.parametrize("lam", [0.0, 0.4, 1.0])
def test_supercharge_is_nilpotent(lam):
    stagger = Staggering(L=10, lam=lam)
    s3 = enumerate_space(10, 3)
    s4 = enumerate_space(10, 4)
    s5 = enumerate_space(10, 5)
    q2 = build_supercharge(s4, stagger, s5) @ build_supercharge(s3, stagger, s4)
    assert q2.max_abs() < 1e-12


@pytest.mark.parametrize("lam", [0.3, 1.0])
def test_hamiltonian_is_positive_semidefinite(lam):
    stagger = Staggering.kink_chain(3, lam)
    h = build_hq(enumerate_space(stagger.L, 3), stagger)
    assert h.is_hermitian()
    assert np.linalg.eigvalsh(h.to_dense()).min() > -1e-12


def test_local_energies_sum_to_hamiltonian():
    stagger = Staggering.kink_chain(2, 0.6)
    space = enumerate_space(stagger.L, 2)
    total = sum((op.to_dense() for op in build_local_energies(space, stagger)), np.zeros((space.dim, space.dim)))
    np.testing.assert_allclose(total, build_hq(space, stagger).to_dense(), atol=1e-12)


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0])
def test_dressed_hamiltonian_without_design_is_hq(lam):
    stagger = Staggering.kink_chain(3, lam)
    space = enumerate_space(stagger.L, 3)
    np.testing.assert_allclose(
        build_hq_dressed(space, stagger).to_dense(), build_hq(space, stagger).to_dense(), atol=1e-12
    )


def test_dressed_hamiltonian_needs_design_for_soft_blockade():
    stagger = Staggering(L=7)
    with pytest.raises(ValueError):
        build_hq_dressed(enumerate_space(7, 2, constrained=False), stagger)


def test_number_operator():
    space = enumerate_space(7, 2)
    np.testing.assert_allclose(number_operator(space).matrix.diagonal(), 2.0)
    assert number_operator(space, 1).matrix.diagonal().sum() == np.sum(space.states & 1)


def test_observable_is_diagonal_detector():
    space = enumerate_space(7, 2)
    dn = build_observable("dn", space, (1.0, 1.0))
    row = space.index_of((1 << 0) | (1 << 6))
    assert dn.matrix.diagonal()[row] == 0.0
    row = space.index_of((1 << 0) | (1 << 2))
    assert dn.matrix.diagonal()[row] == 1.0
    with pytest.raises(ValueError):
        build_observable("dn4", space, (1.0, 1.0))


def test_dense_conversion_limit():
    big = SimpleNamespace(dim=5000)
    op = LinearOperator(sp.csr_matrix((5000, 5000)), big, big)
    with pytest.raises(DimensionLimitError):
        op.to_dense()


def test_hopping_from_primary_dressing():
    params = RydbergParams.from_layer(lithium_84s(), 10)
    assert params.J == pytest.approx(4.0e3, abs=0.2e3)
    assert params.mu[0] == params.mu[-1] == params.J
    assert params.mu[1] == 0.0
    scaled = params.scaled()
    assert scaled.J == 1.0
    assert scaled.Delta == pytest.approx(params.Delta / params.J)


def test_interaction_matrix_respects_range_cut():
    params = RydbergParams.from_layer(lithium_84s(), 6).scaled()
    full = interaction_matrix(params)
    cut = interaction_matrix(params.truncated(2))
    assert full[0, 3] > 0 and cut[0, 3] == 0.0
    assert cut[0, 2] == full[0, 2]
    np.testing.assert_allclose(np.diag(full), 0.0)
    np.testing.assert_allclose(full, full.T)


def test_rydberg_hamiltonian_is_hermitian():
    params = RydbergParams.from_layer(lithium_84s(), 4).scaled()
    space = enumerate_rydberg(4, 2)
    h = build_rydberg(space, params)
    assert h.shape == (space.dim, space.dim)
    assert h.is_hermitian()


def test_undriven_rydberg_chain_conserves_rydberg_number():
    params = RydbergParams.from_layer(lithium_84s(), 5).scaled()
    params = params.model_copy(update={"Omega": [0.0] * 5})
    space = enumerate_rydberg(5, 2)
    h = build_rydberg(space, params).to_dense()
    pop = rydberg_population(space).to_dense()
    np.testing.assert_allclose(h @ pop - pop @ h, 0.0, atol=1e-9)


def test_rydberg_params_validation():
    with pytest.raises(ValueError):
        RydbergParams(mu=[0.0, 0.0], Omega=[1.0], Delta=1.0, C6=1.0)
    with pytest.raises(ValueError):
        RydbergParams(J=-1.0, mu=[0.0], Omega=[1.0], Delta=1.0, C6=1.0)
