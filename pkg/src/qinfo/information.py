"""Information measures in bits: Shannon, von Neumann, measurement statistics.

All logarithms are base 2. The convention ``0 log 0 = 0`` is applied by an
explicit mask rather than a limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import (
    ClassicalEnsemble,
    DensityOperator,
    ProbVector,
    QuantumEnsemble,
    density_operator,
    spectral_decompose,
)
from .hilbert import DimensionMismatch, MeasurementBasis, StateVector
from .sampling import RandomStream, default_workers, map_streams, sample_pure_states, split_work

EULER_GAMMA = 0.5772156649
ASYMPTOTIC_GAP_BITS = (1.0 - EULER_GAMMA) / math.log(2.0)
MC_SIGMA_GATE = 4.0


@dataclass(frozen=True)
class InfoReport:
    """Preparation information I, von Neumann entropy S and their gap."""

    preparation_bits: float
    entropy_bits: float
    gap_bits: float
    context: str = ""


@dataclass(frozen=True)
class MeanInfoResult:
    """Average measurement information on a random pure state, exact and/or sampled."""

    dim: int
    closed_form_bits: float
    mc_estimate_bits: float | None = None
    mc_stderr_bits: float | None = None
    samples: int | None = None

    @property
    def deviation_sigmas(self) -> float | None:
        if self.mc_estimate_bits is None or not self.mc_stderr_bits:
            return None
        return abs(self.closed_form_bits - self.mc_estimate_bits) / self.mc_stderr_bits

    @property
    def consistent(self) -> bool:
        """Within ``MC_SIGMA_GATE`` standard errors (trivially true without an estimate)."""
        s = self.deviation_sigmas
        return s is None or s <= MC_SIGMA_GATE


def entropy_bits(p: np.ndarray, axis: int = -1) -> np.ndarray | float:
    """Shannon entropy along ``axis`` of an array of probabilities (no validation)."""
    p = np.asarray(p, dtype=float)
    safe = np.where(p > 0, p, 1.0)
    terms = np.where(p > 0, -p * np.log2(safe), 0.0)
    out = terms.sum(axis=axis)
    return float(out) if np.ndim(out) == 0 else out


def shannon_info(p) -> float:
    """Gibbs-Shannon information ``-sum p log2 p`` of a probability vector."""
    return float(entropy_bits(ProbVector.coerce(p).probs))


def gibbs_sequence_bits(N: int, p) -> float:
    """``log2`` of the multinomial count ``N! / prod (N p_j)!`` of sequences with
    fixed occupation numbers ``N p_j``.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    probs = ProbVector.coerce(p).probs
    occ = N * probs
    counts = np.rint(occ)
    if np.any(np.abs(occ - counts) > 1e-9 * N):
        raise ValueError("occupation numbers N*p_j must be integers")
    log_n = math.lgamma(N + 1) - sum(math.lgamma(c + 1) for c in counts)
    return max(0.0, log_n / math.log(2.0))


def preparation_info(e: QuantumEnsemble | ClassicalEnsemble) -> float:
    """Information needed to pick one member of the ensemble: ``H(p)``."""
    return shannon_info(e.probs)


def missing_info(e: ClassicalEnsemble) -> float:
    """Classical entropy of an ensemble; identical to its preparation information."""
    return preparation_info(e)


def von_neumann_entropy(rho: DensityOperator) -> float:
    """``-tr(rho log2 rho)`` from the clamped spectrum."""
    return shannon_info(spectral_decompose(rho).eigenvalues)


def _check_dims(a, b) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"incompatible dimensions {a.dim} and {b.dim}")


def measurement_distribution(rho: DensityOperator, basis: MeasurementBasis) -> ProbVector:
    """Outcome probabilities ``q_n = <n|rho|n>``."""
    _check_dims(rho, basis)
    b = basis.vectors
    q = np.einsum("in,ij,jn->n", b.conj(), rho.matrix, b).real
    q = np.clip(q, 0.0, None)
    return ProbVector(q / q.sum())


def born_probabilities(states: np.ndarray, basis: MeasurementBasis) -> np.ndarray:
    """``|<n|psi_i>|**2`` for rows ``psi_i`` of ``states``; shape ``(len(states), D)``."""
    amps = np.atleast_2d(states) @ basis.vectors.conj()
    return np.abs(amps) ** 2


def measurement_info_given_state(psi: StateVector, basis: MeasurementBasis) -> float:
    """Information gained by measuring ``basis`` on the pure state ``psi``."""
    _check_dims(psi, basis)
    return float(entropy_bits(born_probabilities(psi.amplitudes, basis)[0]))


def double_stochastic_matrix(a: MeasurementBasis, b: MeasurementBasis) -> np.ndarray:
    """Matrix ``|<a_n|b_m>|**2``; all rows and columns sum to one."""
    _check_dims(a, b)
    return np.abs(a.vectors.conj().T @ b.vectors) ** 2


def excess_measurement_info(rho: DensityOperator, basis: MeasurementBasis) -> float:
    """``H(q) - S(rho)``: nonnegative, zero exactly for an eigenbasis."""
    return shannon_info(measurement_distribution(rho, basis)) - von_neumann_entropy(rho)


def info_report(e: QuantumEnsemble, context: str = "") -> InfoReport:
    i_bits = preparation_info(e)
    s_bits = von_neumann_entropy(density_operator(e))
    return InfoReport(i_bits, s_bits, i_bits - s_bits, context)


def mean_measurement_info_closed(D: int) -> float:
    """Average information from a fixed von Neumann measurement on a uniformly
    random pure state: ``(1/ln 2) * sum_{k=2}^{D} 1/k``.
    """
    if D < 2:
        raise ValueError("mean measurement information requires D >= 2")
    if D <= 64:
        partial = math.fsum(1.0 / k for k in range(2, D + 1))
    else:
        # smallest terms first keeps pairwise summation accurate
        partial = float(np.sum(1.0 / np.arange(D, 1, -1, dtype=float)))
    return partial / math.log(2.0)


def mean_measurement_info_mc(
    D: int,
    samples: int,
    rng: RandomStream,
    basis: MeasurementBasis | None = None,
    workers: int | None = None,
) -> MeanInfoResult:
    """Monte Carlo estimate of the average measurement information.

    Haar states are measured in ``basis`` (computational by default). The
    estimate is split over ``workers`` substreams; results are reproducible
    for a fixed seed and worker count.
    """
    if D < 2:
        raise ValueError("mean measurement information requires D >= 2")
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    basis = basis or MeasurementBasis.computational(D)
    if basis.dim != D:
        raise DimensionMismatch(f"basis has dimension {basis.dim}, expected {D}")
    workers = workers or default_workers()

    def chunk(n: int, stream: RandomStream) -> np.ndarray:
        return entropy_bits(born_probabilities(sample_pure_states(D, n, stream), basis), axis=1)

    values = np.concatenate(map_streams(chunk, split_work(samples, workers), rng, workers))
    return MeanInfoResult(
        dim=D,
        closed_form_bits=mean_measurement_info_closed(D),
        mc_estimate_bits=float(values.mean()),
        mc_stderr_bits=float(values.std(ddof=1) / math.sqrt(samples)),
        samples=samples,
    )


def accessible_info_uniform(D: int) -> float:
    """Accessible information of the uniform ensemble, ``log2 D - mean measurement info``."""
    return math.log2(D) - mean_measurement_info_closed(D)
