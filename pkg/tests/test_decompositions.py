import numpy as np
import pytest

from bures2q import decompositions as dc
from bures2q import measures, states
from bures2q.errors import DimensionError, NotApplicableError
from conftest import grid_product_overlap, random_ginibre_states

SKEWED = states.PureState([np.sqrt(0.9), 0, 0, np.sqrt(0.1)])


def test_schmidt_examples():
    assert abs(dc.schmidt(states.bell(0)).lambda_max - 0.5) < 1e-15
    assert abs(dc.schmidt(states.basis_state("01")).lambda_max - 1) < 1e-15
    form = dc.schmidt(SKEWED)
    assert abs(form.lambda_max - 0.9) < 1e-14
    (u1, v1), (u2, v2) = form.left_basis, form.right_basis
    assert np.allclose(u1.vec, [1, 0]) and np.allclose(u2.vec, [1, 0])
    assert np.allclose(np.abs(v1.vec), [0, 1]) and np.allclose(np.abs(v2.vec), [0, 1])


def test_schmidt_reconstructs_state(rng):
    for _ in range(100):
        psi = states.haar_random_pure(rng)
        form = dc.schmidt(psi)
        assert 0.5 <= form.lambda_max <= 1
        assert abs(abs(np.vdot(form.state(), psi.vec)) - 1) < 1e-10
        for basis in (form.left_basis, form.right_basis):
            assert abs(np.vdot(basis[0].vec, basis[1].vec)) < 1e-10


def test_schmidt_phase_convention(rng):
    form = dc.schmidt(states.haar_random_pure(rng))
    for q in (form.left_basis[0], form.left_basis[1], form.right_basis[0]):
        k = np.argmax(np.abs(q.vec))
        assert q.vec[k].imag == 0 and q.vec[k].real > 0


def test_schmidt_rejects_qubit():
    with pytest.raises(DimensionError):
        dc.schmidt(states.PureState([1, 0]))


def test_closest_product_examples():
    a, b, ov = dc.closest_product_pure(states.basis_state("00"))
    assert np.allclose(a.vec, [1, 0]) and np.allclose(b.vec, [1, 0]) and ov == 1.0
    a, b, ov = dc.closest_product_pure(states.bell(0))
    assert abs(ov - 0.5) < 1e-12
    assert abs(grid_product_overlap(states.bell(0).vec) - 0.5) < 1e-12
    a, b, ov = dc.closest_product_pure(SKEWED)
    assert np.allclose(a.vec, [1, 0]) and np.allclose(b.vec, [1, 0])
    assert abs(ov - 0.9) < 1e-12
    assert abs(grid_product_overlap(SKEWED.vec) - 0.9) < 1e-12


def test_closest_product_equals_schmidt_coefficient(rng):
    for _ in range(50):
        psi = states.haar_random_pure(rng)
        a, b, ov = dc.closest_product_pure(psi)
        assert abs(ov - dc.schmidt(psi).lambda_max) < 1e-10
        assert abs(ov - abs(np.vdot(np.kron(a.vec, b.vec), psi.vec)) ** 2) < 1e-12


def test_optimal_decomposition_pure_input():
    psi = states.haar_random_pure(states.make_rng(4))
    dec = dc.optimal_decomposition(psi)
    assert len(dec.weights) == 1
    assert abs(abs(np.vdot(dec.states[0].vec, psi.vec)) - 1) < 1e-10


def test_optimal_decomposition_werner():
    rho = states.werner(0.8)
    dec = dc.optimal_decomposition(rho)
    assert len(dec.weights) == 4
    for psi in dec.states:
        assert abs(measures.pure_concurrence(psi) - 0.7) < 1e-8
    assert np.max(np.abs(dec.mixture() - rho.mat)) < 1e-9


def test_optimal_decomposition_random():
    for rho in random_ginibre_states(31, 100, ranks=(4, 3, 2)):
        c = measures.concurrence(rho)
        if c == 0:
            continue
        dec = dc.optimal_decomposition(rho)
        assert max(abs(measures.pure_concurrence(s) - c) for s in dec.states) < 1e-8
        assert np.max(np.abs(dec.mixture() - rho.mat)) < 1e-9
        assert abs(dc.average_schmidt(dec) - measures.mu_of(rho)) < 1e-8


def test_optimal_decomposition_separable_is_not_applicable():
    with pytest.raises(NotApplicableError):
        dc.optimal_decomposition(states.werner(0.2))


def test_product_decomposition_separable(rng):
    for rho in [states.werner(0.2), states.werner(1 / 3), states.validate_density(np.eye(4) / 4)]:
        dec = dc.product_decomposition(rho)
        assert np.max(np.abs(dec.mixture() - rho.mat)) < 1e-9
        assert max(measures.pure_concurrence(s) for s in dec.states) < 1e-7


def test_closest_separable_bell():
    result = dc.closest_separable(states.bell(0))
    assert np.allclose(result.ensemble.weights, [0.5, 0.5])
    assert np.allclose(result.sigma.mat, np.diag([0.5, 0, 0, 0.5]), atol=1e-12)
    assert abs(measures.fidelity(states.bell(0), result.sigma) - 0.5) < 1e-12


def test_closest_separable_separable_input():
    rho = states.werner(0.25)
    result = dc.closest_separable(rho)
    assert result.sigma is rho
    assert measures.fidelity(rho, result.sigma) == pytest.approx(1, abs=1e-12)
    assert np.max(np.abs(result.ensemble.mixture() - rho.mat)) < 1e-9


def test_closest_separable_matches_closed_form():
    for rho in random_ginibre_states(41, 100, ranks=(4, 3, 2, 1)):
        result = dc.closest_separable(rho)
        assert abs(measures.fidelity(rho, result.sigma) - measures.mu_of(rho)) < 1e-7
        assert np.max(np.abs(result.ensemble.mixture() - result.sigma.mat)) < 1e-12


def test_average_functionals_bell():
    from bures2q.states import PureDecomposition

    dec = PureDecomposition(np.array([1.0]), (states.bell(0),))
    assert abs(dc.average_schmidt(dec) - 0.5) < 1e-15
    assert abs(dc.average_entanglement(dec) - 1) < 1e-12


def test_isometry_decompositions_never_beat_closed_form(rng):
    for rho in random_ginibre_states(51, 5):
        mu = measures.mu_of(rho)
        for _ in range(40):
            k = int(rng.integers(4, 9))
            dec = states.ensemble_from_isometry(rho, states.random_isometry(rng, k, 4))
            assert dc.average_schmidt(dec) <= mu + 1e-9
