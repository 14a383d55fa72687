"""Fourier analysis on bounded Vilenkin groups at desk scale.

Exact finite models of the group, its character system, Dirichlet/Fejer
kernels, a fast mixed-radix transform, Lebesgue/Hardy quasinorms, and two
martingale families with critically slow modulus decay whose Fejer means
diverge along lacunary subsequences.
"""

from .errors import CapacityError, ResolutionError
from .structure import (
    GroupPoint,
    VilenkinStructure,
    add_points,
    basis_point,
    cell_to_point,
    cylinder_cells,
    digits_to_index,
    index_to_digits,
    leading_position,
    point_to_cell,
    sub_points,
    zero_point,
)
from .transform import (
    FejerWeight,
    Spectrum,
    StepFunction,
    analyze,
    condexp,
    convolve,
    fejer_mean,
    fejer_weight,
    maximal_function,
    partial_sum,
    synthesize,
    weighted_maximal_fejer,
)
from .kernels import (
    character,
    character_values,
    dirichlet_kernel,
    fejer_kernel,
    fejer_lower_bound_cells,
    lacunary_index,
    rademacher,
    rademacher_values,
    verify_fejer_lower_bounds,
)
from .norms import (
    AtomCertificate,
    AtomicDecomposition,
    CylinderInterval,
    NormReport,
    assemble_from_atoms,
    hardy_norm,
    lp_quasinorm,
    modulus_of_continuity,
    norm_report,
    validate_atom,
    weak_lp_quasinorm,
)
from .counterexamples import (
    build_critical_example,
    build_sparse_critical_example,
    critical_atom,
    kernel_halfnorm_scan,
    modulus_ratio_report,
    sparse_critical_atom,
    sparse_divergence_statistic,
    sparse_modulus_ratio_report,
    weak_divergence_statistic,
)

__version__ = "0.1.0"
