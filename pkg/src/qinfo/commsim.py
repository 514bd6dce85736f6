"""Prepare-and-measure channel: we draw an alternative, prepare it, you measure.

The mutual information between the prepared index and the outcome is
estimated with the plug-in estimator on a table of joint counts. It carries
an upward bias of roughly ``(rows - 1)(cols - 1) / (2 trials ln 2)`` bits,
so tolerances on empirical values should allow for it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

import numpy as np

from .ensembles import ClassicalEnsemble, QuantumEnsemble, density_operator
from .hilbert import DimensionMismatch, MeasurementBasis
from .information import (
    accessible_info_uniform,
    born_probabilities,
    entropy_bits,
    mean_measurement_info_mc,
    preparation_info,
    shannon_info,
    von_neumann_entropy,
)
from .sampling import RandomStream, default_workers, map_streams, split_work


@dataclass(frozen=True, eq=False)
class JointCounts:
    """Counts of (prepared index, outcome) pairs."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.array(self.counts, dtype=np.int64, copy=True)
        if c.ndim != 2 or np.any(c < 0):
            raise ValueError("joint counts must be a 2-d array of nonnegative integers")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def rows(self) -> int:
        return self.counts.shape[0]

    @property
    def cols(self) -> int:
        return self.counts.shape[1]

    @property
    def trials(self) -> int:
        return int(self.counts.sum())

    def joint_probabilities(self) -> np.ndarray:
        if self.trials == 0:
            raise ValueError("no trials recorded")
        return self.counts / self.trials

    def to_csv(self) -> str:
        """Long format with columns ``input,outcome,count``, row-major."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["input", "outcome", "count"])
        for j in range(self.rows):
            for n in range(self.cols):
                w.writerow([j, n, int(self.counts[j, n])])
        return buf.getvalue()


@dataclass(frozen=True)
class ChannelReport:
    mutual_info_bits: float
    outcome_entropy_bits: float
    conditional_entropy_bits: float
    preparation_bits: float
    vn_entropy_bits: float | None = None
    accessible_closed_bits: float | None = None
    mutual_info_stderr_bits: float | None = None
    trials: int | None = None
    method: str = "exact"

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def exact_joint(e: QuantumEnsemble, basis: MeasurementBasis) -> np.ndarray:
    """Exact joint distribution ``p_j |<n|psi_j>|**2``."""
    if e.dim != basis.dim:
        raise DimensionMismatch(f"ensemble dimension {e.dim} vs basis dimension {basis.dim}")
    return e.probs.probs[:, None] * born_probabilities(e.amplitude_matrix(), basis)


def mutual_information(joint: JointCounts | np.ndarray) -> float:
    """``H(X) + H(Y) - H(X,Y)`` of a joint table (counts are normalized first)."""
    if isinstance(joint, JointCounts):
        p = joint.joint_probabilities()
    else:
        p = np.asarray(joint, dtype=float)
        total = p.sum()
        if p.ndim != 2 or total <= 0 or np.any(p < 0):
            raise ValueError("joint distribution must be a nonnegative 2-d array with positive mass")
        p = p / total
    hx = entropy_bits(p.sum(axis=1))
    hy = entropy_bits(p.sum(axis=0))
    return hx + hy - entropy_bits(p.ravel())


def _report_from_joint(p: np.ndarray, **extra) -> ChannelReport:
    hx = entropy_bits(p.sum(axis=1))
    hy = entropy_bits(p.sum(axis=0))
    cond = entropy_bits(p.ravel()) - hx
    extra.setdefault("preparation_bits", hx)
    return ChannelReport(mutual_info_bits=hy - cond, outcome_entropy_bits=hy,
                         conditional_entropy_bits=cond, **extra)


def _born_table(e: QuantumEnsemble, basis: MeasurementBasis) -> np.ndarray:
    born = born_probabilities(e.amplitude_matrix(), basis)
    return born / born.sum(axis=1, keepdims=True)


def simulate_channel(
    e: QuantumEnsemble,
    basis: MeasurementBasis,
    trials: int,
    rng: RandomStream,
    workers: int | None = None,
) -> JointCounts:
    """Sample ``trials`` rounds: input ``j ~ p``, then outcome ``n ~ |<n|psi_j>|**2``."""
    if e.dim != basis.dim:
        raise DimensionMismatch(f"ensemble dimension {e.dim} vs basis dimension {basis.dim}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    born = _born_table(e, basis)
    probs = e.probs.probs
    workers = workers or default_workers()

    def chunk(n: int, stream: RandomStream) -> np.ndarray:
        g = stream.generator
        inputs = g.choice(len(probs), size=n, p=probs)
        table = np.zeros((len(probs), basis.dim), dtype=np.int64)
        for j, m in enumerate(np.bincount(inputs, minlength=len(probs))):
            if m:
                table[j] = g.multinomial(m, born[j])
        return table

    parts = map_streams(chunk, split_work(trials, workers), rng, workers)
    return JointCounts(np.sum(parts, axis=0))


def channel_report(
    e: QuantumEnsemble,
    basis: MeasurementBasis,
    trials: int | None = None,
    rng: RandomStream | None = None,
) -> ChannelReport:
    """Mutual-information breakdown for one ensemble and measurement.

    With ``trials=None`` the exact joint distribution is used and the
    preparation information is ``H(p)``. With sampled trials it is the
    entropy of the realized input frequencies, the information actually
    spent preparing that run.
    """
    s_bits = von_neumann_entropy(density_operator(e))
    if trials is None:
        return _report_from_joint(exact_joint(e, basis), preparation_bits=preparation_info(e),
                                  vn_entropy_bits=s_bits)
    if rng is None:
        raise ValueError("sampled channel needs a RandomStream")
    return report_from_counts(simulate_channel(e, basis, trials, rng), vn_entropy_bits=s_bits)


def report_from_counts(jc: JointCounts, vn_entropy_bits: float | None = None) -> ChannelReport:
    """Plug-in breakdown of a simulated run; preparation bits come from the realized inputs."""
    return _report_from_joint(jc.joint_probabilities(), vn_entropy_bits=vn_entropy_bits,
                              trials=jc.trials, method="mc")


def uniform_ensemble_experiment(
    D: int,
    samples: int,
    rng: RandomStream,
    basis: MeasurementBasis | None = None,
    workers: int | None = None,
) -> ChannelReport:
    """Accessible information of the uniform ensemble by Monte Carlo.

    The outcome distribution of the uniform ensemble is flat, so
    ``H(Y) = log2 D``; the conditional entropy is the average measurement
    information over Haar-random states. The sampled states form a finite
    equal-weight ensemble whose preparation information, ``log2 samples``,
    is what the report lists.
    """
    if D < 2:
        raise ValueError("D must be at least 2")
    mc = mean_measurement_info_mc(D, samples, rng, basis=basis, workers=workers)
    hy = math.log2(D)
    return ChannelReport(
        mutual_info_bits=hy - mc.mc_estimate_bits,
        outcome_entropy_bits=hy,
        conditional_entropy_bits=mc.mc_estimate_bits,
        preparation_bits=math.log2(samples),
        vn_entropy_bits=hy,
        accessible_closed_bits=accessible_info_uniform(D),
        mutual_info_stderr_bits=mc.mc_stderr_bits,
        trials=samples,
        method="mc",
    )


def report_consistent(report: ChannelReport, sigmas: float = 4.0) -> bool:
    """Whether a Monte Carlo accessible-information estimate agrees with the closed form."""
    if report.accessible_closed_bits is None or not report.mutual_info_stderr_bits:
        return True
    dev = abs(report.mutual_info_bits - report.accessible_closed_bits)
    return dev <= sigmas * report.mutual_info_stderr_bits


def classical_channel_experiment(
    e: ClassicalEnsemble,
    trials: int | None,
    rng: RandomStream | None = None,
) -> ChannelReport:
    """Noiseless readout of a classical cell: the outcome is the prepared cell.

    ``trials=None`` takes the exact path, where the mutual information
    equals the preparation information.
    """
    probs = e.probs.probs
    if trials is None:
        joint = np.diag(probs)
        return _report_from_joint(joint, preparation_bits=preparation_info(e),
                                  vn_entropy_bits=shannon_info(e.probs))
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if rng is None:
        raise ValueError("sampled channel needs a RandomStream")
    freq = rng.generator.multinomial(trials, probs)
    jc = JointCounts(np.diag(freq))
    return _report_from_joint(jc.joint_probabilities(), vn_entropy_bits=shannon_info(e.probs),
                              trials=trials, method="mc")

