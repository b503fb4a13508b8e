"""Scalar entanglement and distance measures for qubit pairs.

Entropies are in bits. ``concurrence`` returns exactly 0.0 below
``CONCURRENCE_ZERO`` so that separable inputs give exactly zero entanglement,
and exactly 1.0 within ``CONCURRENCE_ONE`` of one: ``sqrt(1 - C**2)`` turns
rounding noise of 1e-16 in C into 1e-8 in ``mu``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import linalg
from .errors import DimensionError, NumericalError, OutOfRangeError
from .states import as_density, as_pure

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

CONCURRENCE_ZERO = 1e-10
CONCURRENCE_ONE = 1e-14
# eigenvalues of sqrt(rho) X sqrt(rho) below this are rounding noise from the
# null space of rank-deficient states; square roots would inflate them to 1e-8
LAMBDA_SQ_FLOOR = 1e-15
FIDELITY_SLACK = 1e-8


@dataclass(frozen=True)
class MeasureReport:
    concurrence: float
    mu: float
    eof: float
    bures_entanglement: float
    fidelity_to_closest_separable: float

    def to_dict(self) -> dict:
        return asdict(self)


def _two_qubit(rho):
    rho = as_density(rho)
    if rho.dim != 4:
        raise DimensionError(f"expected a two-qubit state, got dimension {rho.dim}")
    return rho


def spin_flip(rho) -> np.ndarray:
    """``(sy (x) sy) conj(rho) (sy (x) sy)`` with conjugation in the standard basis."""
    rho = _two_qubit(rho)
    return SIGMA_YY @ rho.mat.conj() @ SIGMA_YY


def concurrence_lambdas(rho) -> np.ndarray:
    """Descending square roots of the eigenvalues of ``rho @ spin_flip(rho)``.

    Taken from the Hermitian matrix ``sqrt(rho) rho~ sqrt(rho)``, which is
    similar to ``rho rho~`` and so has the same spectrum.
    """
    rho = _two_qubit(rho)
    root = linalg.psd_sqrt(rho.mat)
    m = root @ spin_flip(rho) @ root
    w = linalg.psd_eigenvalues(0.5 * (m + m.conj().T))
    return np.sqrt(np.where(w < LAMBDA_SQ_FLOOR, 0.0, w))


def concurrence(rho) -> float:
    lam = concurrence_lambdas(rho)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    if c < CONCURRENCE_ZERO:
        return 0.0
    if c > 1.0 - CONCURRENCE_ONE:
        return 1.0
    return float(c)


def pure_concurrence(psi) -> float:
    """``|<psi|psi~>|`` for a two-qubit pure state."""
    v = as_pure(psi).vec
    if v.size != 4:
        raise DimensionError("expected a two-qubit pure state")
    return float(abs(v @ SIGMA_YY @ v))


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``.

    Accepts density matrices or pure states. The result is clamped to
    ``[0, 1]``; an excursion beyond ``FIDELITY_SLACK`` raises ``NumericalError``.
    """
    rho, sigma = as_density(rho), as_density(sigma)
    if rho.dim != sigma.dim:
        raise DimensionError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    root = linalg.psd_sqrt(rho.mat)
    m = root @ sigma.mat @ root
    w = linalg.psd_eigenvalues(0.5 * (m + m.conj().T))
    f = float(np.sum(np.sqrt(np.where(w < LAMBDA_SQ_FLOOR, 0.0, w)))) ** 2
    if f > 1.0 + FIDELITY_SLACK:
        raise NumericalError(f"fidelity {f!r} exceeds 1")
    return min(max(f, 0.0), 1.0)


def bures_from_fidelity(f: float) -> float:
    return 2.0 - 2.0 * np.sqrt(f)


def bures_distance(rho, sigma) -> float:
    return float(bures_from_fidelity(fidelity(rho, sigma)))


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise OutOfRangeError(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def entanglement_entropy(psi) -> float:
    """Von Neumann entropy (bits) of either reduced state of a pure state."""
    psi = as_pure(psi)
    if psi.dim != 4:
        raise DimensionError("expected a two-qubit pure state")
    reduced = linalg.partial_trace(psi.projector(), keep="A")
    lam = linalg.psd_eigenvalues(reduced)[0]
    return binary_entropy(min(max(lam, 0.5), 1.0))


def mu_from_concurrence(c: float) -> float:
    if not 0.0 <= c <= 1.0:
        raise OutOfRangeError(f"concurrence must lie in [0, 1], got {c}")
    return 0.5 * (1.0 + np.sqrt(1.0 - c * c))


def mu_of(rho) -> float:
    """Common majority Schmidt coefficient of an optimal pure decomposition."""
    return float(mu_from_concurrence(concurrence(rho)))


def eof(rho) -> float:
    """Entanglement of formation in bits: ``h(mu)``."""
    return binary_entropy(mu_of(rho))


def bures_entanglement(rho) -> float:
    """Closed-form Bures distance from ``rho`` to the separable set."""
    return float(bures_from_fidelity(mu_of(rho)))


def report(rho) -> MeasureReport:
    c = concurrence(rho)
    mu = float(mu_from_concurrence(c))
    return MeasureReport(
        concurrence=c,
        mu=mu,
        eof=binary_entropy(mu),
        bures_entanglement=float(bures_from_fidelity(mu)),
        fidelity_to_closest_separable=mu,
    )

