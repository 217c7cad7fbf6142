"""Spectral characterization of noisy quantum channels.

Dense eigen/singular spectra of channel superoperators, matrix-Chernoff
concentration bounds on ordered singular values, and desk-scale experiment
pipelines for imperfect error mitigation, imperfect error correction and
random channel ensembles.
"""

from .linalg import (HermitianDilation, SpectralReport, cluster_values,
                     dilate, eigenvalues, eigenvalues_hermitian, is_normal,
                     is_trace_preserving, is_unital, principal_submatrix,
                     singular_values, spectral_report, split_psd)
from .pauli import PauliString, pauli_group
from .channels import (KrausChannel, Superoperator,
                       amplitude_damping_channel, compose, ginibre,
                       haar_unitary, identity_superoperator,
                       pauli_mixture_channel, random_kraus_channel,
                       random_pauli_channel, random_unitary_channel,
                       superoperator, superoperator_of_operator, unvec, vec)
from .chernoff import (ChernoffInputs, ChernoffReport, chernoff_mu,
                       expectation_bound, multiplicity_offset,
                       singular_bound_pipeline, tail_bound)
from .ensembles import (GapReport, PeripheralProjection, gap_experiment,
                        peripheral_projector, spectral_gap)
from .pec import (MitigationDistribution, PauliNoiseModel, PECConfig,
                  invert_pauli_noise, mitigated_estimator,
                  mitigation_experiment, perturb_noise,
                  sample_mitigated_instance)
from .qec import (StabilizerCode, SyndromeProjector, build_code,
                  noisy_round, perfect_spectrum_prediction, qec_experiment,
                  recovery_superoperator, singular_multiplicity_table,
                  syndrome_projector)

__version__ = "0.1.0"
