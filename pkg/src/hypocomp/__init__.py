"""Weighted composition operators C: f -> psi (f o phi) on the Hardy space
and the weighted Bergman spaces of the unit disk.

The package classifies linear-fractional symbols, evaluates the closed-form
hyponormality exclusions, normal forms, spectral and essential spectral
radii and norm bounds, and backs the formulas with finite-section matrix
numerics and kernel-vector certificates.
"""

from .errors import (
    BranchViolationError,
    ConvergenceFailureError,
    DegenerateMapError,
    HypocompError,
    HypothesisMismatchError,
    IdentityMapError,
    IndeterminateError,
    InvalidParameterError,
    NoAngularDerivativeError,
    NoDenjoyWolffError,
    NotAFixedPointError,
    NotSelfMapError,
    OutsideDiskError,
    PoleAtOriginError,
    PoleEncounteredError,
    PrecisionLossError,
    SpaceMismatchError,
    TheoryUnavailableError,
    ZeroConstantTermError,
    ZeroSymbolError,
)
from .funcalg import (
    AnalyticFunction,
    Polynomial,
    RationalFunction,
    TaylorSeries,
    compose_with_moebius,
    constant_fn,
    evaluate,
    expand_analytic,
    expand_rational,
    kernel_function,
    no_zero_in_closed_disk,
    poly,
    polynomial_fn,
    rational,
    rational_fn,
    series_mul,
    series_pow_real,
)
from .matrixrep import (
    OperatorMatrix,
    SpectralEstimate,
    adjoint_kernel_residual,
    build_multiplication,
    build_weighted_composition,
    gelfand_estimate,
    hermitian_min_eig,
    kernel_gram_norms,
    operator_norm,
    self_commutator,
    truncation_eigenvalues,
    truncation_spectral_radius,
    write_eigenvalues_csv,
    write_matrix_csv,
)
from .moebius import (
    FixedPointData,
    MapClass,
    MapKind,
    MoebiusMap,
    alpha_p,
    angular_derivative,
    cayley_parabolic,
    classify,
    compose,
    denjoy_wolff,
    dilation,
    fixed_points,
    hyperbolic_nonauto_form,
    is_self_map,
    iterate,
    map_distance,
    rotation,
)
from .space import (
    CoeffVector,
    KreinData,
    SpaceSpec,
    WeightSequence,
    bergman,
    beta,
    beta_array,
    coeff_vector_from_taylor,
    hardy,
    inner_product,
    kernel,
    kernel_analytic,
    kernel_norm,
    krein_adjoint,
    space_from_label,
)
from .theory import (
    CertificateWitness,
    ClarkSingularPart,
    HyponormalityVerdict,
    NormalFormSymbols,
    NormBounds,
    Outcome,
    SpectralReport,
    WeightedOptions,
    clark_singular_part,
    classify_unweighted,
    classify_weighted,
    conjugate_to_origin,
    eigenvalue_bound,
    essential_spectral_radius_closed,
    kernel_quotient_weight,
    norm_bounds,
    norm_lower_bound_grid,
    normal_form,
    parabolic_kernel_inequality,
    spectral_radius_closed,
    spectral_report,
    witness_search,
)

__version__ = "0.1.0"
