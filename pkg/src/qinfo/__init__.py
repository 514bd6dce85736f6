"""Numerical quantum information: state-space geometry, entropies,
measurement information, Schmidt machinery, cloning and channel simulation."""

from .cloning import ClonabilityVerdict, apparatus_clonability_check, clonability_check
from .commsim import (
    ChannelReport,
    JointCounts,
    channel_report,
    classical_channel_experiment,
    exact_joint,
    mutual_information,
    simulate_channel,
    uniform_ensemble_experiment,
)
from .ensembles import (
    ClassicalEnsemble,
    DensityOperator,
    ProbVector,
    QuantumEnsemble,
    SpectralDecomposition,
    classical_density,
    density_operator,
    ensembles_equivalent,
    spectral_decompose,
    uniform_quantum_ensemble,
)
from .geometry import (
    PhaseSpaceSpec,
    QuantumResolutionSpec,
    classical_microstate_bits,
    classical_vs_quantum_counts,
    projective_volume,
    quantum_microstate_bits,
    resolution_volume,
    sphere_area,
)
from .hilbert import (
    DimensionMismatch,
    FiducialDecomposition,
    MeasurementBasis,
    StateVector,
    fiducial_decompose,
    hilbert_angle,
    inner_product,
    tensor,
)
from .information import (
    InfoReport,
    MeanInfoResult,
    accessible_info_uniform,
    double_stochastic_matrix,
    excess_measurement_info,
    gibbs_sequence_bits,
    info_report,
    mean_measurement_info_closed,
    mean_measurement_info_mc,
    measurement_distribution,
    measurement_info_given_state,
    preparation_info,
    shannon_info,
    von_neumann_entropy,
)
from .sampling import RandomStream, sample_basis, sample_pure_state, sample_unitary
from .subsystems import (
    BipartiteStructure,
    SchmidtResult,
    marginal_density,
    partial_trace,
    schmidt_decompose,
)

__version__ = "0.1.0"
