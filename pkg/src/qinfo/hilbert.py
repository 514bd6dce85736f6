"""Finite-dimensional complex Hilbert space: state vectors, overlaps, angles.

Index convention for tensor products is a-major: the first factor's index
varies slowest, so ``|n>|k>`` sits at position ``n * dim_b + k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

NORM_TOL = 1e-9
PHASE_EQUAL_TOL = 1e-8
_DEGENERATE_SIN = 1e-9


class DimensionMismatch(ValueError):
    """Raised when two objects live in Hilbert spaces of different dimension."""


def _frozen_copy(values, dtype=np.complex128) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized pure state given by its amplitudes in a fixed basis.

    Construction rejects vectors whose norm is off by more than ``NORM_TOL``.
    Use :meth:`normalize` to build a state from an arbitrary nonzero vector.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen_copy(self.amplitudes)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("amplitudes must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state vector not normalized: <psi|psi> = {norm2!r}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalize(cls, values: Sequence[complex] | np.ndarray) -> "StateVector":
        arr = np.asarray(values, dtype=np.complex128)
        norm = np.linalg.norm(arr)
        if norm == 0 or not np.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(arr / norm)

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        """Standard basis vector ``|index>`` of a ``dim``-dimensional space."""
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} out of range for dim {dim}")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def equal_up_to_phase(self, other: "StateVector", tol: float = PHASE_EQUAL_TOL) -> bool:
        return hilbert_angle(self, other) < tol

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim}, amplitudes={np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Ordered orthonormal basis defining a pure von Neumann measurement.

    ``vectors`` is a ``D x D`` matrix whose columns are the basis vectors.
    """

    vectors: np.ndarray

    def __post_init__(self):
        mat = _frozen_copy(self.vectors)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise ValueError("basis must be a square D x D matrix of column vectors")
        gram = mat.conj().T @ mat
        err = np.abs(gram - np.eye(mat.shape[0])).max()
        if err > NORM_TOL:
            raise ValueError(f"basis vectors are not orthonormal (max Gram error {err:.3e})")
        object.__setattr__(self, "vectors", mat)

    @classmethod
    def computational(cls, dim: int) -> "MeasurementBasis":
        return cls(np.eye(dim, dtype=np.complex128))

    @classmethod
    def from_states(cls, states: Sequence[StateVector]) -> "MeasurementBasis":
        return cls(np.column_stack([s.amplitudes for s in states]))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, n: int) -> StateVector:
        return StateVector(self.vectors[:, n])

    def __iter__(self):
        return (self[n] for n in range(self.dim))


@dataclass(frozen=True, eq=False)
class FiducialDecomposition:
    """``|psi> = cos(polar_angle)|psi0> + sin(polar_angle)|eta>`` with
    ``<psi0|psi>`` real and nonnegative.

    ``defined`` is False when the polar angle vanishes; ``orthogonal_part``
    is then a deterministic placeholder orthogonal to the fiducial.
    """

    polar_angle: float
    orthogonal_part: StateVector
    defined: bool
    phase: complex = field(default=1.0 + 0j)

    def reconstruct(self, fiducial: StateVector) -> StateVector:
        amps = (np.cos(self.polar_angle) * fiducial.amplitudes
                + np.sin(self.polar_angle) * self.orthogonal_part.amplitudes)
        return StateVector.normalize(amps)


def _check_dims(a, b) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"incompatible dimensions {a.dim} and {b.dim}")


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, antilinear in the first argument."""
    _check_dims(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def overlap(a: StateVector, b: StateVector) -> float:
    """Overlap magnitude ``|<a|b>|`` clamped into [0, 1]."""
    return float(min(1.0, max(0.0, abs(inner_product(a, b)))))


def hilbert_angle(a: StateVector, b: StateVector) -> float:
    """Fubini-Study distance ``arccos |<a|b>|`` in radians, in [0, pi/2].

    Evaluated as ``atan2(sin, cos)`` with the sine taken from the part of
    ``b`` orthogonal to ``a``; plain ``arccos`` loses half the digits near 0.
    """
    _check_dims(a, b)
    amp = np.vdot(a.amplitudes, b.amplitudes)
    cos_phi = min(1.0, abs(amp))
    sin_phi = min(1.0, float(np.linalg.norm(b.amplitudes - amp * a.amplitudes)))
    return float(min(np.pi / 2, np.arctan2(sin_phi, cos_phi)))


def _placeholder_orthogonal(psi0: StateVector) -> StateVector:
    # First standard basis vector with a usable component orthogonal to psi0.
    d = psi0.dim
    for n in range(d):
        e = np.zeros(d, dtype=np.complex128)
        e[n] = 1.0
        v = e - np.vdot(psi0.amplitudes, e) * psi0.amplitudes
        if np.linalg.norm(v) > 1e-6:
            return StateVector.normalize(v)
    raise ValueError("dimension 1 has no vector orthogonal to the fiducial")


def fiducial_decompose(psi: StateVector, psi0: StateVector) -> FiducialDecomposition:
    """Split ``psi`` into its component along ``psi0`` and an orthogonal unit vector.

    The global phase of ``psi`` is chosen so ``<psi0|psi>`` is real and
    nonnegative; the removed phase is kept in ``phase`` so that
    ``phase * reconstruct(psi0)`` equals ``psi`` componentwise.
    """
    _check_dims(psi, psi0)
    amp = np.vdot(psi0.amplitudes, psi.amplitudes)
    mag = abs(amp)
    phase = amp / mag if mag > 0 else 1.0 + 0j
    aligned = psi.amplitudes / phase
    cos_phi = min(1.0, mag)
    residual = aligned - cos_phi * psi0.amplitudes
    sin_phi = float(np.linalg.norm(residual))
    polar = float(np.arctan2(sin_phi, cos_phi))
    if sin_phi < _DEGENERATE_SIN:
        if psi.dim == 1:
            return FiducialDecomposition(0.0, psi0, False, complex(phase))
        return FiducialDecomposition(0.0, _placeholder_orthogonal(psi0), False, complex(phase))
    eta = residual / sin_phi
    # strip any leftover fiducial component from rounding
    eta = eta - np.vdot(psi0.amplitudes, eta) * psi0.amplitudes
    return FiducialDecomposition(polar, StateVector.normalize(eta), True, complex(phase))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Product state ``|a>|b>`` in a-major index order."""
    return StateVector.normalize(np.kron(a.amplitudes, b.amplitudes))


def plus_state(dim: int = 2) -> StateVector:
    """Uniform superposition of the computational basis."""
    return StateVector.normalize(np.ones(dim, dtype=np.complex128))
