"""Unit vectors, rank-one projectors and Pancharatnam phase relations.

Everything here is finite dimensional.  Functions accept either a
:class:`StateVector` or a plain 1-D array of amplitudes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, UndefinedPhaseError

ORTHO_THRESHOLD = 1e-10
NORM_TOL = 1e-12


def wrap_phase(x):
    """Map angles onto the principal branch (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    y = np.where(y == -np.pi, np.pi, y)
    return float(y) if np.ndim(y) == 0 else y


@dataclass(frozen=True)
class StateVector:
    """Normalised vector of complex amplitudes.

    ``norm_factor`` records the norm of the raw input, so callers reading
    external data can see what normalisation was applied.
    """

    amplitudes: np.ndarray
    norm_factor: float = field(default=1.0, compare=False)

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if a.size < 2:
            raise ValueError("state vectors need dimension >= 2")
        nrm = float(np.linalg.norm(a))
        if not np.isfinite(nrm) or nrm == 0.0:
            raise ValueError("cannot normalise a zero or non-finite vector")
        if abs(nrm - 1.0) > NORM_TOL:
            a = a / nrm
        else:
            nrm = 1.0
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "norm_factor", nrm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def rephase(self, theta: float) -> "StateVector":
        return StateVector(np.exp(1j * theta) * self.amplitudes)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "re": self.amplitudes.real.tolist(),
            "im": self.amplitudes.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj) -> "StateVector":
        if isinstance(obj, str):
            obj = json.loads(obj)
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise DimensionMismatchError("'re' and 'im' lengths differ")
        if "dim" in obj and int(obj["dim"]) != re.size:
            raise DimensionMismatchError(
                f"declared dim {obj['dim']} but {re.size} amplitudes given")
        return cls(re + 1j * im)


@dataclass(frozen=True)
class Ray:
    """Pure-state density matrix psi psi^dagger."""

    projector: np.ndarray

    def __post_init__(self):
        p = np.array(self.projector, dtype=complex)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("projector must be a square matrix")
        if np.max(np.abs(p - p.conj().T)) > 1e-12:
            raise ValueError("projector is not Hermitian")
        if np.max(np.abs(p @ p - p)) > 1e-10:
            raise ValueError("projector is not idempotent")
        if abs(np.trace(p) - 1.0) > 1e-12:
            raise ValueError("projector does not have unit trace")
        p.setflags(write=False)
        object.__setattr__(self, "projector", p)

    @property
    def dim(self) -> int:
        return self.projector.shape[0]

    def distance(self, other: "Ray") -> float:
        """1 - Tr(rho rho'), zero iff the rays coincide."""
        return float(1.0 - np.real(np.trace(self.projector @ other.projector)))


def as_array(a) -> np.ndarray:
    if isinstance(a, StateVector):
        return a.amplitudes
    return np.asarray(a, dtype=complex).reshape(-1)


def _check_dims(a, b):
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


def inner_product(a, b) -> complex:
    """(a, b) = sum conj(a_i) b_i, conjugate-linear in ``a``."""
    a, b = as_array(a), as_array(b)
    _check_dims(a, b)
    return complex(np.vdot(a, b))


def project_to_ray(a) -> Ray:
    v = as_array(a)
    v = v / np.linalg.norm(v)
    return Ray(np.outer(v, v.conj()))


def pancharatnam_phase(a, b, threshold: float = ORTHO_THRESHOLD) -> float:
    """Relative phase arg(a, b) on (-pi, pi]."""
    ov = inner_product(a, b)
    if abs(ov) <= threshold:
        raise UndefinedPhaseError(
            f"undefined relative phase: |(a,b)| = {abs(ov):.3e}")
    return wrap_phase(np.angle(ov))


def in_phase(a, b, tol: float = 1e-9, threshold: float = ORTHO_THRESHOLD) -> bool:
    """True when (a, b) is real and positive to within ``tol`` in angle."""
    return abs(pancharatnam_phase(a, b, threshold)) < tol


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    return StateVector(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def read_state(path) -> StateVector:
    with open(path, encoding="utf-8") as fh:
        return StateVector.from_json(json.load(fh))


def write_state(state: StateVector, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state.to_json(), fh)
