"""Schmidt forms, optimal pure-state decompositions and the closest separable state.

The optimal decomposition follows Wootters' construction. Let ``x_j`` be the
subnormalized vectors that diagonalize the spin-flip bilinear form
``beta(a, b) = a^T (sy (x) sy) b`` on the range of ``rho``, with
``beta(x_j, x_j) = l_j`` the concurrence lambdas. Taking
``y = (x_1, i x_2, i x_3, i x_4)`` gives ``beta(y_j, y_j) = s_j`` with
``sum(s) = C``. For any real orthogonal ``O`` the states ``z = y O`` still
decompose ``rho``, and member ``k`` has concurrence
``sum_j O_jk**2 s_j / |z_k|**2``. So equal concurrence ``C`` for every member
amounts to zeroing the diagonal of ``O^T (diag(s) - C Re(y^dagger y)) O``,
a traceless real symmetric matrix. That can always be done with at most
three Givens rotations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg, measures
from .errors import DimensionError, NotApplicableError, NumericalError
from .states import (
    DECOMP_TOL,
    PRUNE_TOL,
    DensityMatrix,
    PureDecomposition,
    PureState,
    SeparableEnsemble,
    as_density,
    as_pure,
    validate_density,
)

TIE_TOL = 1e-12
RANK_TOL = 1e-14

_HADAMARD4 = 0.5 * np.array(
    [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]], dtype=float
)


@dataclass(frozen=True)
class SchmidtForm:
    """``sqrt(l) u1 (x) u2 + sqrt(1 - l) v1 (x) v2`` with ``l = lambda_max >= 1/2``.

    ``u1``, ``v1`` and ``u2`` have their largest component real positive;
    ``v2`` carries the relative phase so that the form reproduces the source
    state up to one global phase.
    """

    lambda_max: float
    left_basis: tuple[PureState, PureState]
    right_basis: tuple[PureState, PureState]

    def state(self) -> np.ndarray:
        (u1, v1), (u2, v2) = self.left_basis, self.right_basis
        return np.sqrt(self.lambda_max) * np.kron(u1.vec, u2.vec) + np.sqrt(
            1.0 - self.lambda_max
        ) * np.kron(v1.vec, v2.vec)


class ClosestSeparable(NamedTuple):
    ensemble: SeparableEnsemble
    sigma: DensityMatrix


def _complement(u: np.ndarray) -> np.ndarray:
    return np.array([-u[1].conjugate(), u[0].conjugate()])


def schmidt(psi) -> SchmidtForm:
    psi = as_pure(psi)
    if psi.dim != 4:
        raise DimensionError("Schmidt decomposition needs a two-qubit pure state")
    m = psi.vec.reshape(2, 2)
    w, u = linalg.hermitian_eig(m @ m.conj().T)
    lam = float(np.clip(w[0], 0.5, 1.0))
    first, second = u[:, 0], u[:, 1]
    if w[0] - w[1] < TIE_TOL and tuple(second.real) > tuple(first.real):
        first, second = second, first
    u1 = linalg.fix_phase(first, "largest")
    v1 = linalg.fix_phase(second, "largest")
    u2 = linalg.fix_phase(m.T @ u1.conj(), "largest")
    u2 /= np.linalg.norm(u2)
    overlap = np.vdot(np.kron(u1, u2), psi.vec)
    g = overlap / abs(overlap)
    if 1.0 - lam > TIE_TOL:
        v2 = (m.T @ v1.conj()) / (g * np.sqrt(1.0 - lam))
        v2 /= np.linalg.norm(v2)
    else:
        v2 = _complement(u2)
    return SchmidtForm(
        lam,
        (PureState(u1), PureState(v1)),
        (PureState(u2), PureState(v2)),
    )


def closest_product_pure(psi) -> tuple[PureState, PureState, float]:
    """Product state ``a (x) b`` maximizing ``|<psi|a b>|**2``, and that overlap."""
    psi = as_pure(psi)
    form = schmidt(psi)
    a, b = form.left_basis[0], form.right_basis[0]
    overlap = abs(np.vdot(np.kron(a.vec, b.vec), psi.vec)) ** 2
    return a, b, float(overlap)


def _diagonalized_vectors(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Columns ``x_j`` with ``x x^dagger = rho`` and ``beta(x_i, x_j) = l_j delta_ij``."""
    w, e = linalg.hermitian_eig(rho.mat)
    w = np.where(w < RANK_TOL * w[0], 0.0, w)
    v = e * np.sqrt(w)
    tau = v.T @ measures.SIGMA_YY @ v
    u, d = linalg.takagi(0.5 * (tau + tau.T))
    return v @ u.conj(), d


def _zero_diagonal_rotation(a: np.ndarray) -> np.ndarray:
    """Real orthogonal ``O`` with ``diag(O^T a O) = 0`` for traceless symmetric ``a``."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    o = np.eye(n)
    tol = 1e-15 * max(np.abs(a).max(), 1e-300)
    for _ in range(2 * n):
        diag = np.diag(a)
        i, j = int(np.argmax(diag)), int(np.argmin(diag))
        if diag[i] <= tol or diag[j] >= -tol:
            break
        aii, ajj, aij = a[i, i], a[j, j], a[i, j]
        # a_jj t^2 + 2 a_ij t + a_ii = 0 has real roots since a_ii a_jj < 0
        disc = np.sqrt(aij * aij - aii * ajj)
        q = -(aij + np.copysign(disc, aij))
        t = aii / q if q != 0 else 0.0
        c = 1.0 / np.sqrt(1.0 + t * t)
        s = t * c
        r = np.eye(n)
        r[i, i] = r[j, j] = c
        r[j, i] = s
        r[i, j] = -s
        a = r.T @ a @ r
        a[i, i] = 0.0
        o = o @ r
    return o


def _closing_phases(lam: np.ndarray) -> np.ndarray:
    """Angles with ``sum_j lam_j exp(i theta_j) = 0`` when ``lam_1 <= lam_2 + lam_3 + lam_4``."""
    l1, l2, l3, l4 = (float(x) for x in lam)
    theta = np.zeros(4)
    if l2 <= 0.0:
        return theta
    span = max(l3 - l4, l1 - l2)
    cos2 = (span * span - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)
    theta[1] = np.arccos(np.clip(cos2, -1.0, 1.0))
    w = l1 + l2 * np.exp(1j * theta[1])
    if l3 <= 0.0:
        return theta
    if abs(w) == 0.0:
        theta[2], theta[3] = 0.0, np.pi
        return theta
    direction = np.angle(-w)
    radius = abs(w)
    cos3 = (l3 * l3 + radius * radius - l4 * l4) / (2.0 * l3 * radius)
    theta[2] = direction + np.arccos(np.clip(cos3, -1.0, 1.0))
    rest = -w - l3 * np.exp(1j * theta[2])
    theta[3] = np.angle(rest) if l4 > 0.0 else 0.0
    return theta


def _decomposition_from(z: np.ndarray, rho: DensityMatrix) -> PureDecomposition:
    weights = np.sum(np.abs(z) ** 2, axis=0)
    keep = np.flatnonzero(weights > PRUNE_TOL)
    states = tuple(
        PureState(linalg.fix_phase(z[:, k] / np.sqrt(weights[k]), "largest")) for k in keep
    )
    wk = weights[keep]
    dec = PureDecomposition(wk / wk.sum(), states)
    err = np.max(np.abs(dec.mixture() - rho.mat))
    if err > DECOMP_TOL:
        raise NumericalError(f"decomposition reconstructs the state only to {err:.3g}")
    return dec


def optimal_decomposition(rho) -> PureDecomposition:
    """At most four pure states, each with concurrence ``C(rho)``, mixing to ``rho``.

    This minimizes the average entanglement over all decompositions.
    Raises ``NotApplicableError`` for separable input (``C = 0``).
    """
    rho = as_density(rho)
    if rho.dim != 4:
        raise DimensionError("optimal decomposition needs a two-qubit state")
    if measures.concurrence(rho) == 0.0:
        raise NotApplicableError("state is separable; no entangled decomposition needed")
    x, lam = _diagonalized_vectors(rho)
    y = x * np.array([1, 1j, 1j, 1j])
    s = lam * np.array([1.0, -1.0, -1.0, -1.0])
    gram = np.real(y.conj().T @ y)
    target = s.sum()
    o = _zero_diagonal_rotation(np.diag(s) - target * gram)
    return _decomposition_from(y @ o, rho)


def product_decomposition(rho) -> PureDecomposition:
    """Decomposition of a separable two-qubit state into (near-)product pure states."""
    rho = as_density(rho)
    x, lam = _diagonalized_vectors(rho)
    y = x * np.exp(0.5j * _closing_phases(lam))
    return _decomposition_from(y @ _HADAMARD4, rho)


def closest_separable(rho) -> ClosestSeparable:
    """Separable state of maximal fidelity with ``rho`` and an explicit product ensemble.

    Each member of the optimal decomposition is replaced by its closest
    product state, with weights ``q_i`` proportional to ``p_i l_i``. A member
    with equal Schmidt coefficients is replaced by both of its Schmidt
    product states at half weight each. For a
    separable input the state itself is returned together with a product
    ensemble reproducing it.
    """
    rho = as_density(rho)
    if rho.dim != 4:
        raise DimensionError("closest separable state needs a two-qubit state")
    separable = measures.concurrence(rho) == 0.0
    dec = product_decomposition(rho) if separable else optimal_decomposition(rho)
    left, right, scores = [], [], []
    for p, psi in dec:
        form = schmidt(psi)
        if form.lambda_max - 0.5 < TIE_TOL:
            # tied Schmidt pairs: neither is preferred, so weight both equally
            pairs = zip(form.left_basis, form.right_basis)
            lam = 0.25
        else:
            pairs = [(form.left_basis[0], form.right_basis[0])]
            lam = form.lambda_max
        for a, b in pairs:
            left.append(a)
            right.append(b)
            scores.append(p * lam)
    scores = np.array(scores)
    ensemble = SeparableEnsemble(scores / scores.sum(), tuple(left), tuple(right))
    sigma = rho if separable else validate_density(ensemble.mixture())
    return ClosestSeparable(ensemble, sigma)


def average_schmidt(dec: PureDecomposition) -> float:
    """``sum_i p_i lambda_max(psi_i)``: squared overlap reached by the product purification."""
    return float(sum(p * schmidt(psi).lambda_max for p, psi in dec))


def average_entanglement(dec: PureDecomposition) -> float:
    """``sum_i p_i h(lambda_max(psi_i))`` in bits."""
    return float(sum(p * measures.binary_entropy(schmidt(psi).lambda_max) for p, psi in dec))
