"""Dense complex linear algebra for small matrices (dimension <= 16).

Matrices are plain ``numpy`` complex arrays. The spectral routines are
implemented here rather than delegated to LAPACK: a cyclic complex Jacobi
eigensolver is unconditionally stable at these sizes and gives us full
control over ordering and phase conventions.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionError,
    NegativeEigenvalueError,
    NonFiniteError,
    NotHermitianError,
    NotSymmetricError,
    NumericalError,
)

HERMITIAN_TOL = 1e-9
SYMMETRIC_TOL = 1e-9
PSD_CLAMP = 1e-9
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
PHASE_EPS = 1e-12


class EigenDecomposition(NamedTuple):
    """Eigenvalues (descending) and unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a 2-d complex array with finite entries."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("matrix has NaN or infinite entries")
    return a


def _as_square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


def hermiticity_error(m) -> float:
    a = np.asarray(m)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, keep="A", dims=(2, 2)) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    Parameters
    ----------
    m : array_like
        Operator on ``C^dims[0] (x) C^dims[1]``.
    keep : {"A", "B"} or {0, 1}
        Which subsystem survives.
    dims : tuple of int
        Local dimensions, qubit pair by default.
    """
    a = _as_square(m)
    da, db = dims
    if a.shape[0] != da * db:
        raise DimensionError(f"expected {da * db}x{da * db} matrix, got {a.shape}")
    t = a.reshape(da, db, da, db)
    if keep in ("A", 0):
        return np.einsum("ijkj->ik", t)
    if keep in ("B", 1):
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def fix_phase(vec, mode="first") -> np.ndarray:
    """Return ``vec`` times a global phase.

    ``mode="first"`` makes the first component with modulus above
    ``PHASE_EPS`` real positive; ``mode="largest"`` does the same for the
    largest-modulus component (first one wins on ties).
    """
    v = np.asarray(vec, dtype=complex)
    mags = np.abs(v)
    if mode == "first":
        idx = np.flatnonzero(mags > PHASE_EPS)
        if idx.size == 0:
            return v.copy()
        k = idx[0]
    elif mode == "largest":
        k = int(np.argmax(mags > mags.max() - PHASE_EPS))
        if mags[k] == 0:
            return v.copy()
    else:
        raise ValueError(mode)
    out = v * (abs(v[k]) / v[k])
    out[k] = abs(v[k])
    return out


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    r = abs(apq)
    if r == 0.0:
        return
    phase = apq / r
    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # phase gauge on column q makes the pivot real, then a real Givens rotation
    j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ j
    a[idx, :] = j.conj().T @ a[idx, :]
    v[:, idx] = v[:, idx] @ j
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def hermitian_eig(h, *, tol: float = HERMITIAN_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Eigenvalues come back in descending order (stable for ties) and each
    eigenvector has its first non-negligible component real positive.
    Raises ``NotHermitianError`` when ``max|h - h^dagger| > tol``.
    """
    a = _as_square(h)
    if hermiticity_error(a) > tol:
        raise NotHermitianError(
            f"matrix is not Hermitian (max |h - h^dagger| = {hermiticity_error(a):.3g})"
        )
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if n > 1 and scale > 0:
        for _ in range(JACOBI_MAX_SWEEPS):
            off = np.linalg.norm(a - np.diag(np.diag(a)))
            if off < JACOBI_TOL * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _jacobi_rotate(a, v, p, q)
    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    for k in range(n):
        v[:, k] = fix_phase(v[:, k], "first")
    return EigenDecomposition(w, v)


def psd_sqrt(h, *, clamp: float = PSD_CLAMP) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-clamp, 0)`` are treated as rounding noise and set to
    zero; anything more negative raises ``NegativeEigenvalueError``.
    """
    w, v = hermitian_eig(h)
    if w.size and w[-1] < -clamp:
        raise NegativeEigenvalueError(f"matrix is not PSD (min eigenvalue {w[-1]:.3g})")
    root = np.sqrt(np.clip(w, 0.0, None))
    out = (v * root) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def psd_eigenvalues(h, *, clamp: float = PSD_CLAMP) -> np.ndarray:
    """Descending eigenvalues of a PSD matrix with noise clamped to zero."""
    w = hermitian_eig(h).eigenvalues
    if w.size and w[-1] < -clamp:
        raise NegativeEigenvalueError(f"matrix is not PSD (min eigenvalue {w[-1]:.3g})")
    return np.clip(w, 0.0, None)


def takagi(t, *, tol: float = SYMMETRIC_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization ``t = u @ diag(d) @ u.T`` of a complex symmetric matrix.

    Returns ``(u, d)`` with ``u`` unitary and ``d`` nonnegative, descending.

    Writing ``t = X + iY``, the real symmetric matrix ``[[X, Y], [Y, -X]]`` has
    spectrum ``{+d_j, -d_j}``, and a positive eigenvector ``[a; b]`` yields the
    Takagi vector ``a + ib``. Positive eigenspaces are orthogonal to the
    negative ones, so degenerate ``d_j`` need no extra care. Vectors for
    vanishing ``d_j`` are completed from the orthogonal complement.
    """
    a = _as_square(t)
    if a.size and np.max(np.abs(a - a.T)) > tol:
        raise NotSymmetricError("matrix is not complex symmetric")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    x, y = a.real, a.imag
    emb = np.block([[x, y], [y, -x]])
    w, vecs = hermitian_eig(emb)
    scale = max(float(np.max(np.abs(w))) if w.size else 0.0, 1e-300)
    npos = int(np.sum(w[:n] > 1e-10 * scale))
    top = vecs[:, :npos].real
    u_pos = top[:n] + 1j * top[n:]
    d = np.zeros(n)
    d[:npos] = w[:npos]
    u = np.zeros((n, n), dtype=complex)
    u[:, :npos] = u_pos
    if npos < n:
        proj = np.eye(n) - u_pos @ u_pos.conj().T
        comp = hermitian_eig(proj).eigenvectors[:, : n - npos]
        u[:, npos:] = comp
    if np.max(np.abs(u.conj().T @ u - np.eye(n))) > 1e-8:
        raise NumericalError("Takagi vectors failed to be orthonormal")
    return u, d
