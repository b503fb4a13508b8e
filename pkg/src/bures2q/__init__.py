"""Bures measure of entanglement for two-qubit states.

The closed form ``E_B = 2 - 2 sqrt(mu)`` with ``mu = (1 + sqrt(1 - C**2)) / 2``
is computed from the concurrence ``C``, checked against an explicit closest
separable state, and checked again by a variational search over the
separable set.
"""
from . import decompositions, linalg, measures, oracle, states
from .decompositions import closest_product_pure, closest_separable, optimal_decomposition, schmidt
from .errors import Bures2qError, NotApplicableError, NumericalError, ValidationError
from .measures import (
    bures_distance,
    bures_entanglement,
    concurrence,
    eof,
    fidelity,
    mu_of,
    report,
)
from .oracle import OracleConfig, maximize_fidelity_separable
from .states import DensityMatrix, PureState, bell, validate_density, werner

__version__ = "0.1.0"

__all__ = [
    "Bures2qError",
    "DensityMatrix",
    "NotApplicableError",
    "NumericalError",
    "OracleConfig",
    "PureState",
    "ValidationError",
    "bell",
    "bures_distance",
    "bures_entanglement",
    "closest_product_pure",
    "closest_separable",
    "concurrence",
    "decompositions",
    "eof",
    "fidelity",
    "linalg",
    "maximize_fidelity_separable",
    "measures",
    "mu_of",
    "optimal_decomposition",
    "oracle",
    "report",
    "schmidt",
    "states",
    "validate_density",
    "werner",
]
