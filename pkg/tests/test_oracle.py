import numpy as np
import pytest

from bures2q import measures, oracle, states
from bures2q.errors import DimensionError, ValidationError
from conftest import random_ginibre_states

FAST = oracle.OracleConfig(num_product_terms=8, restarts=6)


def test_default_config():
    cfg = oracle.OracleConfig()
    assert cfg.seed == oracle.DEFAULT_SEED
    assert cfg.num_product_terms >= 4 and cfg.restarts >= 1


@pytest.mark.parametrize(
    "kwargs",
    [{"num_product_terms": 0}, {"restarts": 0}, {"max_iterations": 0}, {"convergence_tol": 0.0}],
)
def test_config_validation(kwargs):
    with pytest.raises(ValidationError):
        oracle.OracleConfig(**kwargs)


def test_evaluate_diagonal_separable():
    p = np.array([0.4, 0.3, 0.2, 0.1])
    rho = np.diag(p)
    params = [
        [0.0, 0.0, 0.0, 0.0, np.sqrt(p[0])],
        [0.0, 0.0, np.pi, 0.0, np.sqrt(p[1])],
        [np.pi, 0.0, 0.0, 0.0, np.sqrt(p[2])],
        [np.pi, 0.0, np.pi, 0.0, np.sqrt(p[3])],
    ]
    assert abs(oracle.evaluate_ensemble(rho, params) - 1) < 1e-12


def test_evaluate_single_product_on_pure_state(rng):
    psi = states.haar_random_pure(rng)
    params = np.array([1.1, 0.3, 2.0, -1.2, 0.7])
    ens = oracle.ensemble_from_params(params)
    prod = np.kron(ens.left[0].vec, ens.right[0].vec)
    assert abs(oracle.evaluate_ensemble(psi, params) - abs(np.vdot(psi.vec, prod)) ** 2) < 1e-10


def test_evaluate_random_params_in_range(rng):
    rho = states.ginibre_random_density(rng)
    for _ in range(50):
        x = oracle.initial_params(rng, 5) + rng.normal(size=25)
        assert 0 <= oracle.evaluate_ensemble(rho, x) <= 1


def test_params_length_checked():
    with pytest.raises(DimensionError):
        oracle.evaluate_ensemble(np.eye(4) / 4, np.zeros(7))
    with pytest.raises(DimensionError):
        oracle.evaluate_ensemble(np.eye(4) / 4, np.ones(10), num_terms=3)


def test_params_round_trip(rng):
    x = oracle.initial_params(rng, 4)
    ens = oracle.ensemble_from_params(x)
    back = oracle.ensemble_from_params(oracle.params_from_ensemble(ens))
    assert np.allclose(back.mixture(), ens.mixture(), atol=1e-12)


def test_objective_gradient_matches_finite_differences(rng):
    rho = states.ginibre_random_density(rng)
    obj = oracle._Objective(np.array(rho.mat), 3)
    x = oracle.initial_params(rng, 3)
    _, g = obj(x)
    h = 1e-6
    fd = np.array([(obj(x + h * e)[0] - obj(x - h * e)[0]) / (2 * h) for e in np.eye(x.size)])
    assert np.max(np.abs(fd - g)) < 1e-6
    assert abs(-obj(x)[0] - oracle.evaluate_ensemble(rho, x)) < 1e-10


def test_separable_reaches_one():
    res = oracle.maximize_fidelity_separable(states.werner(0.2))
    assert abs(res.best_fidelity - 1) < 1e-6


def test_bell_reaches_one_half():
    res = oracle.maximize_fidelity_separable(states.bell(0))
    assert abs(res.best_fidelity - 0.5) < 1e-3
    assert res.best_fidelity <= 0.5 + 1e-8


def test_random_states_bracketed():
    for rho in random_ginibre_states(61, 5):
        mu = measures.mu_of(rho)
        res = oracle.maximize_fidelity_separable(rho, FAST)
        assert mu - 1e-3 <= res.best_fidelity <= mu + 1e-8


def test_result_is_consistent(rng):
    rho = states.ginibre_random_density(rng)
    res = oracle.maximize_fidelity_separable(rho, FAST)
    assert len(res.restart_fidelities) == FAST.restarts
    assert res.restart_index_of_best == int(np.argmax(res.restart_fidelities))
    assert abs(oracle.evaluate_ensemble(rho, res.best_params) - res.best_fidelity) < 1e-12
    assert abs(measures.fidelity(rho, res.best_ensemble.mixture()) - res.best_fidelity) < 1e-12
    assert res.iterations_used >= 1


def test_seeded_runs_are_reproducible_and_parallel_matches_serial(rng):
    rho = states.ginibre_random_density(rng)
    a = oracle.maximize_fidelity_separable(rho, FAST)
    b = oracle.maximize_fidelity_separable(rho, FAST)
    c = oracle.maximize_fidelity_separable(rho, FAST, parallel=True)
    assert a.best_fidelity == b.best_fidelity == c.best_fidelity
    assert a.best_params.tobytes() == c.best_params.tobytes()
    assert a.restart_fidelities == c.restart_fidelities


def test_callbacks_are_invoked(rng):
    rho = states.ginibre_random_density(rng)
    seen, steps = [], []
    cfg = oracle.OracleConfig(num_product_terms=4, restarts=2)
    oracle.maximize_fidelity_separable(
        rho, cfg, on_evaluate=seen.append, on_iterate=lambda r, f: steps.append((r, f))
    )
    assert seen and all(0 <= f <= 1 + 1e-12 for f in seen)
    assert {r for r, _ in steps} <= {0, 1} and steps


def test_rejects_single_qubit():
    with pytest.raises(DimensionError):
        oracle.maximize_fidelity_separable(np.eye(2) / 2, FAST)
