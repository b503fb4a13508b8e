import numpy as np
import pytest

from bures2q import states


@pytest.fixture
def rng():
    return states.make_rng(12345)


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return g + g.conj().T


def random_ginibre_states(seed, count, ranks=(4,)):
    rng = states.make_rng(seed)
    return [states.ginibre_random_density(rng, ranks[k % len(ranks)]) for k in range(count)]


def local_unitary(rng):
    return np.kron(states.haar_random_unitary(rng, 2), states.haar_random_unitary(rng, 2))


def grid_product_overlap(psi, step_deg=1.0):
    """Max of |<a b|psi>|^2 with a on a Bloch-angle grid and b optimal.

    For fixed a the best b is the normalized (a^dagger (x) I) psi, so the
    inner maximum is exact; the grid only covers the left sphere.
    """
    theta = np.deg2rad(np.arange(0.0, 180.0 + step_deg / 2, step_deg))
    phi = np.deg2rad(np.arange(0.0, 360.0, step_deg))
    t, p = np.meshgrid(theta, phi, indexing="ij")
    a = np.stack([np.cos(t / 2).ravel(), (np.exp(1j * p) * np.sin(t / 2)).ravel()], axis=1)
    m = np.asarray(psi).reshape(2, 2)
    reduced = a.conj() @ m
    return float(np.max(np.sum(np.abs(reduced) ** 2, axis=1)))
