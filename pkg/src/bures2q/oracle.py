"""Variational lower bound on the fidelity between a state and the separable set.

The separable state is parameterized as a mixture of ``num_product_terms``
product pure states. Term ``k`` uses five unconstrained reals
``(theta_a, phi_a, theta_b, phi_b, w)``. The qubits are
``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>`` and the weight is
``w_k**2 / sum_j w_j**2``.

The objective is maximized from random starting points with L-BFGS using
an analytic gradient. If ``M = A sigma A`` with ``A = sqrt(rho)``, then
``d tr sqrt(M) = tr(A M^{-1/2} A d sigma) / 2``, and the chain rule through
the parameterization is elementary. Nothing here uses the concurrence or the
decomposition machinery, so the result is an independent check. The inner
loop runs on LAPACK (``numpy.linalg.eigh``) for speed, and the value
returned to callers is recomputed with :func:`bures2q.measures.fidelity`.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from . import measures
from .errors import DimensionError, ValidationError
from .states import (
    PureState,
    SeparableEnsemble,
    as_density,
    bloch_angles,
    make_rng,
    validate_density,
)

PARAMS_PER_TERM = 5
DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class OracleConfig:
    num_product_terms: int = 16
    restarts: int = 32
    max_iterations: int = 2000
    convergence_tol: float = 1e-9
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.num_product_terms < 1 or self.restarts < 1:
            raise ValidationError("num_product_terms and restarts must be >= 1")
        if self.max_iterations < 1 or not self.convergence_tol > 0:
            raise ValidationError("max_iterations must be >= 1 and convergence_tol > 0")


@dataclass(frozen=True)
class OracleResult:
    best_fidelity: float
    best_ensemble: SeparableEnsemble
    iterations_used: int
    restart_index_of_best: int
    best_params: np.ndarray = field(repr=False)
    restart_fidelities: tuple[float, ...] = field(default=(), repr=False)


def _split(params, num_terms: int | None = None) -> np.ndarray:
    x = np.asarray(params, dtype=float).reshape(-1)
    if x.size == 0 or x.size % PARAMS_PER_TERM:
        raise DimensionError(f"parameter count {x.size} is not a positive multiple of 5")
    if num_terms is not None and x.size != num_terms * PARAMS_PER_TERM:
        raise DimensionError(f"expected {num_terms * PARAMS_PER_TERM} parameters, got {x.size}")
    return x.reshape(-1, PARAMS_PER_TERM)


def _qubits(theta, phi):
    return np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=1)


def ensemble_from_params(params, num_terms: int | None = None) -> SeparableEnsemble:
    p = _split(params, num_terms)
    w2 = p[:, 4] ** 2
    if w2.sum() == 0:
        raise ValidationError("all ensemble weights vanish")
    a = _qubits(p[:, 0], p[:, 1])
    b = _qubits(p[:, 2], p[:, 3])
    return SeparableEnsemble(
        w2 / w2.sum(),
        tuple(PureState.normalized(v) for v in a),
        tuple(PureState.normalized(v) for v in b),
    )


def params_from_ensemble(ensemble: SeparableEnsemble) -> np.ndarray:
    """Inverse of :func:`ensemble_from_params` up to the phases of each qubit."""
    rows = [
        [*bloch_angles(a), *bloch_angles(b), np.sqrt(q)] for q, a, b in ensemble
    ]
    return np.array(rows, dtype=float).reshape(-1)


def evaluate_ensemble(rho, params, num_terms: int | None = None) -> float:
    """Fidelity between ``rho`` and the separable mixture encoded by ``params``."""
    rho = as_density(rho)
    sigma = validate_density(ensemble_from_params(params, num_terms).mixture())
    return measures.fidelity(rho, sigma)


class _Objective:
    """Negative fidelity and its gradient for L-BFGS."""

    def __init__(self, rho: np.ndarray, num_terms: int, on_evaluate=None):
        w, v = np.linalg.eigh(rho)
        self.root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
        self.k = num_terms
        self.on_evaluate = on_evaluate

    def fidelity(self, x) -> float:
        return -self(x)[0]

    def __call__(self, x):
        k = self.k
        t1, p1, t2, p2, w = x.reshape(k, PARAMS_PER_TERM).T
        c1, s1, c2, s2 = np.cos(t1 / 2), np.sin(t1 / 2), np.cos(t2 / 2), np.sin(t2 / 2)
        e1, e2 = np.exp(1j * p1), np.exp(1j * p2)
        a = np.stack([c1, e1 * s1], axis=1)
        b = np.stack([c2, e2 * s2], axis=1)
        vecs = (a[:, :, None] * b[:, None, :]).reshape(k, 4)
        total = np.dot(w, w)
        if total == 0.0:
            return 0.0, np.zeros_like(x)
        q = w * w / total
        sigma = np.einsum("k,ki,kj->ij", q, vecs, vecs.conj())
        m = self.root @ sigma @ self.root
        ev, u = np.linalg.eigh(0.5 * (m + m.conj().T))
        keep = ev > 1e-13 * max(ev[-1], 1e-300)
        roots = np.sqrt(np.where(keep, ev, 0.0))
        s = roots.sum()
        f = s * s
        if self.on_evaluate is not None:
            self.on_evaluate(f)
        inv = np.where(keep, 1.0 / np.where(keep, roots, 1.0), 0.0)
        # f = s^2 and ds = tr(A M^{-1/2} A dsigma) / 2, so df = tr(h dsigma)
        h = s * (self.root @ (u * inv) @ u.conj().T @ self.root)
        hv = vecs @ h.T
        g = np.real(np.einsum("ki,ki->k", vecs.conj(), hv))

        def along(dv):
            return 2 * q * np.real(np.einsum("ki,ki->k", hv.conj(), dv.reshape(k, 4)))

        zero = np.zeros_like(s1)
        da_t = np.stack([-0.5 * s1, 0.5 * e1 * c1], axis=1)
        da_p = np.stack([zero, 1j * e1 * s1], axis=1)
        db_t = np.stack([-0.5 * s2, 0.5 * e2 * c2], axis=1)
        db_p = np.stack([zero, 1j * e2 * s2], axis=1)
        grad = np.stack(
            [
                along(da_t[:, :, None] * b[:, None, :]),
                along(da_p[:, :, None] * b[:, None, :]),
                along(a[:, :, None] * db_t[:, None, :]),
                along(a[:, :, None] * db_p[:, None, :]),
                2 * w * (g - np.dot(q, g)) / total,
            ],
            axis=1,
        )
        return -f, -grad.reshape(-1)


def initial_params(rng: np.random.Generator, num_terms: int) -> np.ndarray:
    x = np.empty((num_terms, PARAMS_PER_TERM))
    x[:, 0] = np.arccos(rng.uniform(-1.0, 1.0, num_terms))
    x[:, 1] = rng.uniform(0.0, 2 * np.pi, num_terms)
    x[:, 2] = np.arccos(rng.uniform(-1.0, 1.0, num_terms))
    x[:, 3] = rng.uniform(0.0, 2 * np.pi, num_terms)
    x[:, 4] = rng.uniform(0.1, 1.0, num_terms)
    return x.reshape(-1)


def _run_restart(rho_mat, cfg: OracleConfig, index: int, on_evaluate, on_iterate):
    objective = _Objective(rho_mat, cfg.num_product_terms, on_evaluate)
    x0 = initial_params(make_rng([cfg.seed, index]), cfg.num_product_terms)
    callback = None
    if on_iterate is not None:
        def callback(intermediate_result):
            on_iterate(index, -float(intermediate_result.fun))
    res = minimize(
        objective,
        x0,
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options={
            "maxiter": cfg.max_iterations,
            "ftol": cfg.convergence_tol,
            "gtol": cfg.convergence_tol,
        },
    )
    return -float(res.fun), res.x, int(res.nit)


def maximize_fidelity_separable(
    rho,
    cfg: OracleConfig | None = None,
    *,
    parallel: bool = False,
    on_evaluate: Callable[[float], None] | None = None,
    on_iterate: Callable[[int, float], None] | None = None,
) -> OracleResult:
    """Multistart search for the separable state closest to ``rho`` in fidelity.

    Restart ``r`` draws its starting point from ``make_rng([cfg.seed, r])``,
    so results do not depend on scheduling; with ``parallel=True`` restarts
    run on a thread pool and are merged exactly as in the serial case
    (largest fidelity, lowest restart index on ties).

    ``on_evaluate`` sees every objective value; ``on_iterate`` receives
    ``(restart, fidelity)`` after each accepted optimizer step.
    """
    cfg = cfg or OracleConfig()
    rho = as_density(rho)
    if rho.dim != 4:
        raise DimensionError("oracle needs a two-qubit state")
    mat = np.array(rho.mat)

    def run(index):
        return _run_restart(mat, cfg, index, on_evaluate, on_iterate)

    if parallel and cfg.restarts > 1:
        with ThreadPoolExecutor() as pool:
            runs = list(pool.map(run, range(cfg.restarts)))
    else:
        runs = [run(r) for r in range(cfg.restarts)]

    best = 0
    for r, (f, _, _) in enumerate(runs):
        if f > runs[best][0]:
            best = r
    _, x, nit = runs[best]
    ensemble = ensemble_from_params(x, cfg.num_product_terms)
    return OracleResult(
        best_fidelity=measures.fidelity(rho, validate_density(ensemble.mixture())),
        best_ensemble=ensemble,
        iterations_used=nit,
        restart_index_of_best=best,
        best_params=x,
        restart_fidelities=tuple(f for f, _, _ in runs),
    )
