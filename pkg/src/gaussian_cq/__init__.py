"""Covariance-level toolkit for bosonic Gaussian classical-quantum channels."""

from .capacity import (
    CapacityResult,
    EnergyConstraint,
    EnsembleStep,
    cea_sweep,
    chi_sequence,
    delta1,
    delta_environment,
    example1_capacity,
    example2_capacities,
    f1_f2,
    gain_ratio,
    gamma_sequence,
    max_output_entropy,
    mutual_information,
)
from .channel import (
    Dilation,
    GaussianChannel,
    apply,
    entropy_gain,
    example1_channel,
    example2_channel,
    is_cq,
    make_channel,
    minimal_dilation,
    weak_complementary,
)
from .gaussian import NATS_TO_BITS, GaussianState, displace, entropy, g_function, is_pure, make_state
from .symplectic import (
    SymplecticBasisSplit,
    SymplecticSpace,
    canonical_form,
    canonicalize_skew,
    complete_isotropic_basis,
    is_symplectic,
    symplectic_eigenvalues,
)

__version__ = "0.1.0"
