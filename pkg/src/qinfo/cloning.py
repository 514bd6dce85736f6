"""Whether an ensemble of pure states can be copied by a unitary.

A unitary copier taking ``|psi>|s>^N`` to ``|psi>^(N+1)`` must preserve
every pairwise inner product, which forces ``x = x**(N+1)`` for each
overlap ``x = <psi_j|psi_k>``. With an apparatus that ends in a
state-dependent ``|A_psi>`` the condition becomes
``x = x**(N+1) <A_j|A_k>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensembles import QuantumEnsemble

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class PairViolation:
    j: int
    k: int
    overlap: float
    violation: float


@dataclass(frozen=True)
class ClonabilityVerdict:
    copies: int
    violating_pairs: tuple[PairViolation, ...] = field(default_factory=tuple)

    @property
    def clonable(self) -> bool:
        return not self.violating_pairs

    def to_dict(self) -> dict:
        return {
            "clonable": self.clonable,
            "copies": self.copies,
            "violating_pairs": [
                {"j": v.j, "k": v.k, "overlap": v.overlap, "violation": v.violation}
                for v in self.violating_pairs
            ],
        }


def _support_overlaps(e: QuantumEnsemble):
    idx = [j for j, p in enumerate(e.probs.probs) if p > 0]
    amps = e.amplitude_matrix()[idx]
    gram = amps.conj() @ amps.T
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            yield idx[a], idx[b], complex(gram[a, b])


def _check_copies(copies: int) -> None:
    if copies < 1:
        raise ValueError("copies must be at least 1")


def clonability_check(e: QuantumEnsemble, copies: int = 1, tol: float = DEFAULT_TOL) -> ClonabilityVerdict:
    """Unitarity test ``|x - x**(N+1)| <= tol`` on every pair of members with
    nonzero probability, using the complex overlap ``x``.
    """
    _check_copies(copies)
    bad = []
    for j, k, x in _support_overlaps(e):
        v = abs(x - x ** (copies + 1))
        if v > tol:
            bad.append(PairViolation(j, k, min(1.0, abs(x)), v))
    return ClonabilityVerdict(copies, tuple(bad))


def apparatus_clonability_check(
    e: QuantumEnsemble, copies: int = 1, tol: float = DEFAULT_TOL
) -> ClonabilityVerdict:
    """Same question with a measuring/preparing apparatus folded into the unitary.

    For each pair the apparatus may supply any final overlap ``a`` with
    ``|a| <= 1``. The smallest achievable residual
    ``min_{|a|<=1} |x - x**(N+1) a|`` equals ``|x| (1 - |x|**N)``, which
    vanishes only for ``|x|`` equal to 0 or 1; the pair is reported when
    that residual exceeds ``tol``.
    """
    _check_copies(copies)
    bad = []
    for j, k, x in _support_overlaps(e):
        r = min(1.0, abs(x))
        v = r * (1.0 - r**copies)
        if v > tol:
            bad.append(PairViolation(j, k, r, v))
    return ClonabilityVerdict(copies, tuple(bad))


def required_apparatus_overlap(overlap: complex, copies: int) -> complex | None:
    """Apparatus overlap ``x**(-N)`` that a nonzero-overlap pair would need, or
    None when the states are orthogonal and any apparatus works.
    """
    if overlap == 0:
        return None
    return complex(np.power(complex(overlap), -copies))
