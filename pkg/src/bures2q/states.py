"""Validated state types, standard test families and random generators.

Conventions
-----------
* Two-qubit vectors use the standard basis ``|00>, |01>, |10>, |11>``
  (qubit A is the left tensor factor).
* Purifications put the ancilla FIRST: index ``4*k + j`` of a 16-vector is
  ``|k>_anc (x) |j>_AB``, so ``partial_trace(P, keep="B", dims=(4, 4))``
  traces the ancilla out.
* Randomized functions take an explicit ``numpy.random.Generator``.
  ``make_rng(seed)`` returns the PCG64 bit generator seeded through
  ``SeedSequence``; results are bit-for-bit reproducible per seed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionError,
    NegativeEigenvalueError,
    NotHermitianError,
    NotIsometryError,
    NotNormalizedError,
    NumericalError,
    OutOfRangeError,
    TraceError,
    ValidationError,
)

STATE_TOL = 1e-9
NORM_TOL = 1e-10
WEIGHT_TOL = 1e-10
PRUNE_TOL = 1e-12
DECOMP_TOL = 1e-9


def make_rng(seed: int | Sequence[int] | None = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


class DensityMatrix:
    """Hermitian, PSD, unit-trace operator on one or two qubits.

    Construct through ``validate_density``; the constructor trusts its input.
    """

    __slots__ = ("_mat",)

    def __init__(self, mat: np.ndarray):
        m = np.array(mat, dtype=complex)
        m.setflags(write=False)
        self._mat = m

    @property
    def mat(self) -> np.ndarray:
        return self._mat

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._mat if dtype is None else self._mat.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"

    def purity(self) -> float:
        return float(np.real(np.trace(self._mat @ self._mat)))


class PureState:
    """Unit-norm complex vector."""

    __slots__ = ("_vec",)

    def __init__(self, vec, *, check: bool = True):
        v = np.array(vec, dtype=complex).reshape(-1)
        if check:
            nrm = np.linalg.norm(v)
            if not np.isfinite(nrm) or abs(nrm - 1.0) > NORM_TOL:
                raise NotNormalizedError(f"state norm is {nrm!r}, expected 1")
        v.setflags(write=False)
        self._vec = v

    @classmethod
    def normalized(cls, vec) -> "PureState":
        v = np.asarray(vec, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise NotNormalizedError("cannot normalize the zero vector")
        return cls(v / nrm)

    @property
    def vec(self) -> np.ndarray:
        return self._vec

    @property
    def dim(self) -> int:
        return self._vec.size

    def projector(self) -> np.ndarray:
        return np.outer(self._vec, self._vec.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector())

    def __array__(self, dtype=None, copy=None):
        return self._vec if dtype is None else self._vec.astype(dtype)

    def __repr__(self):
        return f"PureState({np.array2string(self._vec, precision=4)})"


def _check_weights(weights: np.ndarray) -> None:
    if np.any(weights < -WEIGHT_TOL) or abs(weights.sum() - 1.0) > WEIGHT_TOL:
        raise ValidationError(f"weights must be a probability vector, got {weights}")


@dataclass(frozen=True)
class PureDecomposition:
    """Convex decomposition ``rho = sum_i p_i |psi_i><psi_i|``."""

    weights: np.ndarray
    states: tuple[PureState, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        _check_weights(w)
        if len(self.states) != w.size:
            raise ValidationError("weights and states differ in length")
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.states)

    def __iter__(self) -> Iterator[tuple[float, PureState]]:
        return iter(zip(self.weights.tolist(), self.states))

    def mixture(self) -> np.ndarray:
        vecs = np.array([s.vec for s in self.states])
        return np.einsum("k,ki,kj->ij", self.weights, vecs, vecs.conj())


@dataclass(frozen=True)
class SeparableEnsemble:
    """Mixture ``sum_i q_i |a_i><a_i| (x) |b_i><b_i|`` of product pure states."""

    weights: np.ndarray
    left: tuple[PureState, ...]
    right: tuple[PureState, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        _check_weights(w)
        if not (len(self.left) == len(self.right) == w.size):
            raise ValidationError("ensemble fields differ in length")
        if any(s.dim != 2 for s in self.left + self.right):
            raise DimensionError("ensemble members must be single-qubit states")
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.left)

    def __iter__(self):
        return iter(zip(self.weights.tolist(), self.left, self.right))

    def mixture(self) -> np.ndarray:
        vecs = np.array([np.kron(a.vec, b.vec) for a, b in zip(self.left, self.right)])
        return np.einsum("k,ki,kj->ij", self.weights, vecs, vecs.conj())

    def density(self) -> DensityMatrix:
        return validate_density(self.mixture())


def validate_density(m, *, tol: float = STATE_TOL) -> DensityMatrix:
    """Check that ``m`` is a one- or two-qubit density matrix.

    Raises a distinct ``ValidationError`` subclass for each failed invariant:
    ``DimensionError``, ``NotHermitianError``, ``TraceError`` or
    ``NegativeEigenvalueError``. The trace is never renormalized.
    """
    if isinstance(m, DensityMatrix):
        return m
    a = linalg.as_matrix(m)
    if a.shape not in ((2, 2), (4, 4)):
        raise DimensionError(f"expected a 2x2 or 4x4 matrix, got {a.shape}")
    herr = linalg.hermiticity_error(a)
    if herr > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max |m - m^dagger| = {herr:.3g})")
    tr = np.trace(a)
    if abs(tr - 1.0) > tol:
        raise TraceError(f"trace is {tr.real:.12g}, expected 1")
    wmin = linalg.hermitian_eig(a).eigenvalues[-1]
    if wmin < -tol:
        raise NegativeEigenvalueError(f"negative eigenvalue {wmin:.3g}")
    return DensityMatrix(0.5 * (a + a.conj().T))


def as_density(x) -> DensityMatrix:
    if isinstance(x, DensityMatrix):
        return x
    if isinstance(x, PureState):
        return x.density()
    return validate_density(x)


def as_pure(x) -> PureState:
    return x if isinstance(x, PureState) else PureState(x)


def basis_state(bits: str) -> PureState:
    """Computational basis ket, e.g. ``basis_state("01")``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return PureState(v)


_BELL = np.array(
    [[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]], dtype=complex
) / np.sqrt(2)


def bell(index: int) -> PureState:
    """Bell states: 0 = Phi+, 1 = Phi-, 2 = Psi+, 3 = Psi-."""
    if index not in range(4):
        raise OutOfRangeError(f"Bell index must be 0..3, got {index}")
    return PureState(_BELL[index])


def werner(p: float) -> DensityMatrix:
    """``p |Phi+><Phi+| + (1 - p) I/4``."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"Werner parameter must lie in [0, 1], got {p}")
    return DensityMatrix(p * bell(0).projector() + (1.0 - p) * np.eye(4) / 4)


def product_state(a, b) -> PureState:
    return PureState(np.kron(as_pure(a).vec, as_pure(b).vec))


def bloch_qubit(theta: float, phi: float) -> PureState:
    return PureState([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_random_pure(rng: np.random.Generator, dim: int = 4) -> PureState:
    if dim < 2:
        raise OutOfRangeError(f"dimension must be >= 2, got {dim}")
    return PureState.normalized(_complex_gaussian(rng, dim))


def ginibre_random_density(rng: np.random.Generator, rank: int = 4) -> DensityMatrix:
    """``G G^dagger / tr(G G^dagger)`` for a 4 x rank complex Gaussian ``G``."""
    if rank not in range(1, 5):
        raise OutOfRangeError(f"rank must be 1..4, got {rank}")
    g = _complex_gaussian(rng, (4, rank))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real)


def haar_random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    q, r = np.linalg.qr(_complex_gaussian(rng, (dim, dim)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns (``rows >= cols``)."""
    if rows < cols:
        raise DimensionError("isometry needs rows >= cols")
    q, r = np.linalg.qr(_complex_gaussian(rng, (rows, cols)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def purify(rho) -> PureState:
    """Standard purification ``sum_i sqrt(l_i) |e_i>_anc |v_i>``.

    ``l_i, v_i`` are eigenpairs of ``rho`` and ``e_i`` the ancilla's
    computational basis; the ancilla is the first tensor factor.
    """
    rho = as_density(rho)
    w, v = linalg.hermitian_eig(rho.mat)
    amps = np.sqrt(np.clip(w, 0.0, None))
    d = rho.dim
    psi = np.zeros(d * d, dtype=complex)
    for k in range(d):
        psi[k * d:(k + 1) * d] = amps[k] * v[:, k]
    return PureState.normalized(psi)


def ensemble_from_isometry(rho, v) -> PureDecomposition:
    """Decomposition of ``rho`` obtained by mixing its eigen-ensemble.

    Member ``j`` is ``sqrt(p_j) |psi_j> = sum_i v[j, i] sqrt(l_i) |e_i>``
    with ``(l_i, e_i)`` the eigenpairs of ``rho``. Every decomposition of
    ``rho`` arises this way for a suitable isometry ``v`` (``K x r`` with
    ``r <= 4`` and ``v^dagger v = I``). Members with weight below
    ``PRUNE_TOL`` are dropped.
    """
    rho = as_density(rho)
    v = linalg.as_matrix(v)
    k, r = v.shape
    if r > rho.dim or k < r:
        raise NotIsometryError(f"isometry shape {v.shape} incompatible with dimension {rho.dim}")
    if np.max(np.abs(v.conj().T @ v - np.eye(r))) > STATE_TOL:
        raise NotIsometryError("columns of v are not orthonormal")
    w, e = linalg.hermitian_eig(rho.mat)
    if np.any(w[r:] > STATE_TOL):
        raise NotIsometryError(f"isometry has {r} columns but the state has larger rank")
    sub = e[:, :r] * np.sqrt(np.clip(w[:r], 0.0, None))
    unnorm = sub @ v.T  # column j is sum_i v[j, i] sqrt(l_i) e_i
    weights = np.sum(np.abs(unnorm) ** 2, axis=0)
    keep = weights > PRUNE_TOL
    states = tuple(PureState(unnorm[:, j] / np.sqrt(weights[j])) for j in np.flatnonzero(keep))
    wk = weights[keep]
    dec = PureDecomposition(wk / wk.sum(), states)
    if np.max(np.abs(dec.mixture() - rho.mat)) > DECOMP_TOL:
        raise NumericalError("isometry mixing failed to reconstruct the state")
    return dec


def bloch_angles(qubit) -> tuple[float, float]:
    """``(theta, phi)`` with ``qubit = e^{ig}(cos(theta/2), e^{i phi} sin(theta/2))``."""
    v = as_pure(qubit).vec
    if v.size != 2:
        raise DimensionError("Bloch angles need a single-qubit state")
    theta = 2.0 * np.arctan2(abs(v[1]), abs(v[0]))
    phi = float(np.angle(v[1] * np.conj(v[0]))) if abs(v[0]) * abs(v[1]) > 0 else 0.0
    return float(theta), phi
