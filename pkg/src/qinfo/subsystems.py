"""Bipartite pure states: Schmidt decomposition and partial traces.

Joint amplitudes use a-major order, ``Psi[n * dim_b + k] = <n|<k|Psi>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import DensityOperator, NumericalFailure, ProbVector, phase_factor
from .hilbert import DimensionMismatch, StateVector

RECONSTRUCTION_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class BipartiteStructure:
    dim_a: int
    dim_b: int
    state: StateVector

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("subsystem dimensions must be positive")
        if self.dim_a * self.dim_b != self.state.dim:
            raise DimensionMismatch(
                f"dims ({self.dim_a}, {self.dim_b}) do not factor joint dimension {self.state.dim}")

    def coefficient_matrix(self) -> np.ndarray:
        return self.state.amplitudes.reshape(self.dim_a, self.dim_b)


@dataclass(frozen=True, eq=False)
class SchmidtResult:
    """``|Psi> = sum_m sqrt(lambda_m) |phi_m>|eta_m>``.

    ``basis_a`` and ``basis_b`` hold the vectors as columns, one per
    coefficient.
    """

    coefficients: ProbVector
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.coefficients.probs > 1e-15))

    def reconstruct(self) -> np.ndarray:
        amps = np.sqrt(self.coefficients.probs)
        return np.einsum("m,im,jm->ij", amps, self.basis_a, self.basis_b).reshape(-1)


def schmidt_decompose(s: BipartiteStructure) -> SchmidtResult:
    """Schmidt form from the SVD of the ``dim_a x dim_b`` coefficient matrix.

    Each ``|phi_m>`` is rephased so its largest component is real positive,
    with the compensating phase moved onto ``|eta_m>``.
    """
    u, sv, vh = np.linalg.svd(s.coefficient_matrix(), full_matrices=False)
    a_vecs = np.empty_like(u)
    b_vecs = vh.T.copy()
    for m in range(sv.size):
        c = phase_factor(u[:, m])
        a_vecs[:, m] = u[:, m] * c
        b_vecs[:, m] = b_vecs[:, m] / c
    lam = sv**2
    result = SchmidtResult(ProbVector(lam / lam.sum()), a_vecs, b_vecs)
    residual = np.linalg.norm(result.reconstruct() - s.state.amplitudes)
    if residual > RECONSTRUCTION_TOL:
        raise NumericalFailure(f"Schmidt reconstruction residual {residual:.3e}")
    return result


def _keep_index(keep) -> int:
    if keep in ("a", 0, 1, "1"):
        return 0
    if keep in ("b", 2, "2"):
        return 1
    raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")


def partial_trace(op: np.ndarray, dims: tuple[int, int], keep="a") -> np.ndarray:
    """Trace out one factor of an operator on ``C^dim_a (x) C^dim_b``.

    ``keep="a"`` returns ``sum_k <k|op|k>`` over the second factor;
    ``keep="b"`` traces out the first.
    """
    da, db = dims
    op = np.asarray(op)
    if op.shape != (da * db, da * db):
        raise DimensionMismatch(f"operator shape {op.shape} does not match dims {dims}")
    t = op.reshape(da, db, da, db)
    if _keep_index(keep) == 0:
        return np.einsum("ikjk->ij", t)
    return np.einsum("kikj->ij", t)


def marginal_density(s: BipartiteStructure, keep="a") -> DensityOperator:
    """Reduced density operator of one subsystem of a joint pure state."""
    c = s.coefficient_matrix()
    rho = c @ c.conj().T if _keep_index(keep) == 0 else c.T @ c.conj()
    return DensityOperator(0.5 * (rho + rho.conj().T))
