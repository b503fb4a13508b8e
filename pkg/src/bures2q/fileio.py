"""JSON state and report files.

State file::

    {"dim": 4, "matrix": [[[re, im], ...], ...]}

``matrix`` is row-major, ``dim`` rows of ``dim`` ``[re, im]`` pairs.

Report file: a JSON object whose field names are those of
:class:`ReportFile`. Optional blocks are omitted when absent. Floats are
written with Python's shortest round-trip ``repr``, so parsing and
re-serializing is lossless.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .states import DensityMatrix, validate_density


class StateFileError(ValidationError):
    code = "parse"


def matrix_to_pairs(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def pairs_to_matrix(rows) -> np.ndarray:
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"matrix entries must be [re, im] number pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise StateFileError(f"matrix must be a square grid of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_digest(m) -> str:
    """SHA-256 of the matrix as interleaved little-endian float64 (re, im), row-major."""
    a = np.ascontiguousarray(np.asarray(m, dtype=np.complex128))
    return hashlib.sha256(a.astype("<c16").tobytes()).hexdigest()


def state_to_dict(rho) -> dict:
    m = np.asarray(rho.mat if isinstance(rho, DensityMatrix) else rho, dtype=complex)
    return {"dim": int(m.shape[0]), "matrix": matrix_to_pairs(m)}


def dumps_state(rho) -> str:
    return json.dumps(state_to_dict(rho)) + "\n"


def loads_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict) or "dim" not in obj or "matrix" not in obj:
        raise StateFileError('state file must be an object with "dim" and "matrix"')
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim not in (2, 4):
        raise StateFileError(f'"dim" must be 2 or 4, got {dim!r}')
    m = pairs_to_matrix(obj["matrix"])
    if m.shape != (dim, dim):
        raise StateFileError(f'"matrix" is {m.shape[0]}x{m.shape[1]} but "dim" is {dim}')
    return m


def parse_state_file(path) -> DensityMatrix:
    """Read and validate a state file. All failures raise ``ValidationError``."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from None
    return validate_density(loads_matrix(text))


def write_state_file(path, rho) -> None:
    Path(path).write_text(dumps_state(rho), encoding="utf-8")


@dataclass
class EnsembleMember:
    weight: float
    left_theta: float
    left_phi: float
    right_theta: float
    right_phi: float


@dataclass
class ClosestSeparableBlock:
    members: list[EnsembleMember]
    fidelity: float
    bures_distance: float
    sigma: list

    @classmethod
    def from_dict(cls, d: dict) -> "ClosestSeparableBlock":
        d = dict(d)
        d["members"] = [EnsembleMember(**m) for m in d["members"]]
        return cls(**d)


@dataclass
class VerificationBlock:
    closed_form: float
    construction: float
    oracle: float
    oracle_fidelity: float
    gap_construction: float
    gap_oracle: float
    gap_oracle_construction: float
    construction_tol: float
    oracle_tol: float
    passed: bool
    restarts: int
    terms: int
    seed: int
    iterations_used: int
    restart_index_of_best: int


@dataclass
class ReportFile:
    input_digest: str
    concurrence: float
    mu: float
    eof: float
    bures_entanglement: float
    fidelity_to_closest_separable: float
    closest_separable: ClosestSeparableBlock | None = None
    verification: VerificationBlock | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: v for k, v in d.items() if v is not None}

    @classmethod
    def from_dict(cls, d: dict) -> "ReportFile":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise StateFileError(f"unknown report fields: {sorted(unknown)}")
        d = dict(d)
        if d.get("closest_separable") is not None:
            d["closest_separable"] = ClosestSeparableBlock.from_dict(d["closest_separable"])
        if d.get("verification") is not None:
            d["verification"] = VerificationBlock(**d["verification"])
        return cls(**d)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ReportFile":
        return cls.from_dict(json.loads(text))
