"""Fubini-Study volumes on projective Hilbert space and microstate counts.

Counts of microstates grow like ``phi**(-2(D-1))`` and overflow quickly, so
they are reported as base-2 logarithms (bits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhaseSpaceSpec:
    """Classical phase space gridded into cells.

    Attributes:
        dof: number of canonical coordinate pairs F.
        area_per_pair: accessible phase-space area per pair.
        resolution_per_pair: cell area per pair; only the ratio to
            ``area_per_pair`` matters.
    """

    dof: int
    area_per_pair: float
    resolution_per_pair: float

    def __post_init__(self):
        if self.dof < 1:
            raise ValueError("dof must be a positive integer")
        if self.area_per_pair <= 0 or self.resolution_per_pair <= 0:
            raise ValueError("phase-space areas must be positive")
        if self.resolution_per_pair > self.area_per_pair:
            raise ValueError("resolution area exceeds accessible area")

    @property
    def total_volume(self) -> float:
        return self.area_per_pair ** self.dof

    @property
    def cell_volume(self) -> float:
        return self.resolution_per_pair ** self.dof

    @property
    def cell_count(self) -> float:
        return (self.area_per_pair / self.resolution_per_pair) ** self.dof


@dataclass(frozen=True)
class QuantumResolutionSpec:
    """Resolution spheres of Hilbert-space radius ``resolution_angle`` in dimension ``dim``."""

    dim: int
    resolution_angle: float

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        if not 0 < self.resolution_angle <= math.pi / 2:
            raise ValueError("resolution angle must lie in (0, pi/2]")


@dataclass(frozen=True)
class CountComparison:
    """Microstate counts (in bits) for the same system, classical vs quantum."""

    dim: int
    bits_per_amplitude: float
    classical_bits: float
    quantum_bits: float

    @property
    def strictly_larger(self) -> bool:
        return self.quantum_bits > self.classical_bits

    @property
    def degenerate_equality(self) -> bool:
        # D = 2 at one bit per amplitude is the only boundary where the counts tie
        return self.quantum_bits == self.classical_bits


def _log_sphere_area(D: int) -> float:
    return math.log(2.0) + (D - 1) * math.log(math.pi) - math.lgamma(D - 1)


def _log_projective_volume(D: int) -> float:
    return (D - 1) * math.log(math.pi) - math.lgamma(D)


def sphere_area(D: int) -> float:
    """Area ``2 pi**(D-1) / (D-2)!`` of the unit (2D-3)-sphere of vectors orthogonal to a fiducial."""
    if D < 2:
        raise ValueError("sphere_area requires D >= 2")
    return math.exp(_log_sphere_area(D))


def projective_volume(D: int) -> float:
    """Total Fubini-Study volume ``pi**(D-1) / (D-1)!`` of projective Hilbert space."""
    if D < 1:
        raise ValueError("projective_volume requires D >= 1")
    return math.exp(_log_projective_volume(D))


def resolution_volume(spec: QuantumResolutionSpec) -> float:
    """Exact volume of a ball of Hilbert-space radius phi: ``sin(phi)**(2(D-1)) * V_D``."""
    D, phi = spec.dim, spec.resolution_angle
    return math.sin(phi) ** (2 * (D - 1)) * projective_volume(D)


def resolution_fraction(spec: QuantumResolutionSpec) -> float:
    """Fraction of projective space within the resolution ball, ``sin(phi)**(2(D-1))``."""
    return math.sin(spec.resolution_angle) ** (2 * (spec.dim - 1))


def small_angle_ratio(spec: QuantumResolutionSpec) -> float:
    """Exact resolution volume over its small-angle form ``phi**(2(D-1)) V_D``."""
    phi = spec.resolution_angle
    return (math.sin(phi) / phi) ** (2 * (spec.dim - 1))


def quantum_microstate_bits(spec: QuantumResolutionSpec) -> float:
    """``log2`` of the quantum microstate count ``phi**(-2(D-1))`` (small-angle form)."""
    return (spec.dim - 1) * -2.0 * math.log2(spec.resolution_angle)


def bits_per_amplitude(resolution_angle: float) -> float:
    return -2.0 * math.log2(resolution_angle)


def resolution_angle_for_bits(bits: float) -> float:
    """Resolution angle (radians) giving ``bits`` of preparation information per amplitude."""
    return 2.0 ** (-bits / 2.0)


def classical_microstate_bits(spec: PhaseSpaceSpec) -> float:
    """``log2`` of the classical cell count ``(A/h0)**F``."""
    return spec.dof * math.log2(spec.area_per_pair / spec.resolution_per_pair)


def classical_vs_quantum_counts(D: int, bits_per_amplitude: float) -> CountComparison:
    if D < 2:
        raise ValueError("comparison requires D >= 2")
    if bits_per_amplitude < 1:
        raise ValueError("bits_per_amplitude must be at least 1")
    return CountComparison(
        dim=D,
        bits_per_amplitude=bits_per_amplitude,
        classical_bits=math.log2(D),
        quantum_bits=(D - 1) * bits_per_amplitude,
    )
