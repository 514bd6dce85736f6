"""Quantum and classical ensembles, density operators and their spectra."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import PhaseSpaceSpec
from .hilbert import DimensionMismatch, MeasurementBasis, StateVector
from .sampling import RandomStream, sample_pure_states

PROB_TOL = 1e-9
HERMITIAN_TOL = 1e-9
PSD_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-8


class NotPositiveSemidefinite(ValueError):
    """An operator has an eigenvalue below ``-PSD_TOL``."""


class NumericalFailure(ArithmeticError):
    """A decomposition failed to reproduce its input within tolerance."""


@dataclass(frozen=True, eq=False)
class ProbVector:
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float, copy=True)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probabilities must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("probabilities must be finite and nonnegative")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def coerce(cls, p) -> "ProbVector":
        return p if isinstance(p, cls) else cls(p)

    @classmethod
    def uniform(cls, n: int) -> "ProbVector":
        return cls(np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return self.probs.size

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)


@dataclass(frozen=True, eq=False)
class QuantumEnsemble:
    """State vectors ``|psi_j>`` with probabilities ``p_j``."""

    states: tuple[StateVector, ...]
    probs: ProbVector

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ValueError("an ensemble needs at least one state")
        probs = ProbVector.coerce(self.probs)
        if len(probs) != len(states):
            raise ValueError(f"{len(states)} states but {len(probs)} probabilities")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise DimensionMismatch(f"ensemble states have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def equal_weights(cls, states: Sequence[StateVector]) -> "QuantumEnsemble":
        return cls(tuple(states), ProbVector.uniform(len(states)))

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self) -> int:
        return len(self.states)

    def amplitude_matrix(self) -> np.ndarray:
        """Rows are the ensemble's state vectors."""
        return np.stack([s.amplitudes for s in self.states])


@dataclass(frozen=True, eq=False)
class ClassicalEnsemble:
    """Probabilities over fine-grained phase-space cells, labelled by index.

    When ``spec`` is given the cell count must match its ``(A/h0)**F``.
    """

    cell_count: int
    probs: ProbVector
    spec: PhaseSpaceSpec | None = None

    def __post_init__(self):
        probs = ProbVector.coerce(self.probs)
        if self.cell_count < 1 or len(probs) != self.cell_count:
            raise ValueError(f"cell_count {self.cell_count} does not match {len(probs)} probabilities")
        if self.spec is not None and not np.isclose(self.spec.cell_count, self.cell_count, rtol=1e-9):
            raise ValueError(
                f"phase-space spec implies {self.spec.cell_count} cells, got {self.cell_count}")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, cell_count: int, spec: PhaseSpaceSpec | None = None) -> "ClassicalEnsemble":
        return cls(cell_count, ProbVector.uniform(cell_count), spec)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive-semidefinite, unit-trace matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError("density operator must be a square matrix")
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
            raise ValueError("density operator is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > PROB_TOL:
            raise ValueError(f"density operator has trace {tr!r}")
        lo = np.linalg.eigvalsh(m).min()
        if lo < -PSD_TOL:
            raise NotPositiveSemidefinite(f"smallest eigenvalue {lo:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def maximally_mixed(cls, D: int) -> "DensityOperator":
        return cls(np.eye(D, dtype=np.complex128) / D)

    @classmethod
    def pure(cls, psi: StateVector) -> "DensityOperator":
        return cls(psi.projector())

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: ProbVector
    eigenvectors: MeasurementBasis

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors.vectors
        return (v * self.eigenvalues.probs) @ v.conj().T

    def projectors(self) -> list[np.ndarray]:
        return [np.outer(v, v.conj()) for v in self.eigenvectors.vectors.T]


def density_operator(e: QuantumEnsemble) -> DensityOperator:
    """``sum_j p_j |psi_j><psi_j|``."""
    a = e.amplitude_matrix()
    rho = (a.T * e.probs.probs) @ a.conj()
    # symmetrize away rounding asymmetry
    return DensityOperator(0.5 * (rho + rho.conj().T))


def phase_factor(v: np.ndarray) -> complex:
    """Unit factor that makes the largest-magnitude component of ``v`` real positive.

    Ties on magnitude go to the lowest index.
    """
    mags = np.abs(v)
    if mags.max() == 0:
        return 1.0 + 0j
    k = int(np.argmax(mags >= mags.max() - 1e-12))
    return complex(mags[k] / v[k])


def canonical_phase(v: np.ndarray) -> np.ndarray:
    return v * phase_factor(v)


def _sort_key(value: float, vec: np.ndarray):
    parts = []
    for z in vec:
        parts.extend((-round(z.real, 10), -round(z.imag, 10)))
    return (-round(value, 12), tuple(parts))


def spectral_decompose(rho: DensityOperator) -> SpectralDecomposition:
    """Eigenvalues in descending order with their orthonormal eigenvectors.

    Eigenvalues in ``[-PSD_TOL, 0)`` are clamped to zero and the spectrum
    renormalized. Within a degenerate eigenvalue the vectors are ordered by
    their canonical-phase components; only the spectral projectors are
    meaningful there.
    """
    vals, vecs = np.linalg.eigh(rho.matrix)
    if vals.min() < -PSD_TOL:
        raise NotPositiveSemidefinite(f"smallest eigenvalue {vals.min():.3e}")
    vals = np.clip(vals, 0.0, None)
    vals = vals / vals.sum()
    cols = [canonical_phase(vecs[:, i]) for i in range(vals.size)]
    order = sorted(range(vals.size), key=lambda i: _sort_key(vals[i], cols[i]))
    result = SpectralDecomposition(
        ProbVector(vals[order]),
        MeasurementBasis(np.column_stack([cols[i] for i in order])),
    )
    residual = np.linalg.norm(result.reconstruct() - rho.matrix)
    if residual > RECONSTRUCTION_TOL:
        raise NumericalFailure(f"spectral reconstruction residual {residual:.3e}")
    return result


def eigen_ensemble(rho: DensityOperator) -> QuantumEnsemble:
    """Ensemble of eigenvectors weighted by eigenvalues (zero weights kept)."""
    sd = spectral_decompose(rho)
    return QuantumEnsemble(tuple(sd.eigenvectors), sd.eigenvalues)


def ensembles_equivalent(a: QuantumEnsemble, b: QuantumEnsemble, tol: float = 1e-9) -> bool:
    """True when both ensembles give the same density operator within ``tol`` (Frobenius)."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"incompatible dimensions {a.dim} and {b.dim}")
    diff = density_operator(a).matrix - density_operator(b).matrix
    return bool(np.linalg.norm(diff) <= tol)


def classical_density(e: ClassicalEnsemble) -> np.ndarray:
    """Phase-space density ``p_j / cell_volume`` on each cell."""
    if e.spec is None:
        raise ValueError("classical density needs a phase-space spec")
    return e.probs.probs / e.spec.cell_volume


def uniform_quantum_ensemble(D: int, count: int, rng: RandomStream) -> QuantumEnsemble:
    """Finite stand-in for the continuous uniform ensemble: ``count`` Haar states, equal weights."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rows = sample_pure_states(D, count, rng)
    return QuantumEnsemble.equal_weights([StateVector(r) for r in rows])


# -- JSON ---------------------------------------------------------------

def _encode_amplitudes(amps: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in amps]


def _decode_amplitudes(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("amplitudes must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def ensemble_to_dict(e: QuantumEnsemble) -> dict:
    return {
        "dim": e.dim,
        "states": [_encode_amplitudes(s.amplitudes) for s in e.states],
        "probs": [float(p) for p in e.probs.probs],
    }


def ensemble_from_dict(data: dict) -> QuantumEnsemble:
    try:
        dim = int(data["dim"])
        states = tuple(StateVector(_decode_amplitudes(s)) for s in data["states"])
        probs = data["probs"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ensemble record: {exc}") from exc
    if any(s.dim != dim for s in states):
        raise ValueError(f"state dimensions disagree with dim={dim}")
    return QuantumEnsemble(states, ProbVector(probs))


def state_to_dict(psi: StateVector) -> dict:
    return {"dim": psi.dim, "amplitudes": _encode_amplitudes(psi.amplitudes)}


def state_from_dict(data: dict) -> StateVector:
    """Read ``{dim, amplitudes}``; a one-state ensemble record is also accepted."""
    if "amplitudes" in data:
        psi = StateVector(_decode_amplitudes(data["amplitudes"]))
        if "dim" in data and int(data["dim"]) != psi.dim:
            raise ValueError(f"state has {psi.dim} amplitudes, dim says {data['dim']}")
        return psi
    if "states" in data:
        e = ensemble_from_dict(data)
        if len(e) != 1:
            raise ValueError("expected a single state, got an ensemble of several")
        return e.states[0]
    raise ValueError("state record needs an 'amplitudes' field")


def load_ensemble(path) -> QuantumEnsemble:
    with open(path) as fh:
        return ensemble_from_dict(json.load(fh))


def dump_ensemble(e: QuantumEnsemble, path) -> None:
    with open(path, "w") as fh:
        json.dump(ensemble_to_dict(e), fh, indent=2)
