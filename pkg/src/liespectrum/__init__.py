"""Joint spectra of solvable matrix Lie algebras via twisted Koszul homology."""

from .algebra import (
    Ideal,
    OperatorLieAlgebra,
    build_algebra,
    character_space_basis,
    close_under_bracket,
    dedup_characters,
    derived_subalgebra,
    direct_product,
    identity_kron,
    is_character,
    join_character,
    kron_with_identity,
    sort_characters,
    split_character,
    triangularize,
)
from .errors import (
    CharacterError,
    ClosureError,
    EmptySpectrumError,
    InputValidationError,
    NumericalInconsistencyError,
    ProblemFileError,
    SizeLimitError,
    SolvabilityError,
    SpectrumToolError,
    TriangularizationError,
)
from .koszul import (
    KoszulComplex,
    boundary_matrix,
    build_complex,
    degree_sign_matrix,
    exterior_basis,
    hodge_extremes,
    hodge_operator,
    homology_dimensions,
    regroup_right_factor_map,
    split_product_blocks,
    split_product_map,
    swap_factors_blocks,
    swap_factors_map,
    tensor_boundary_blocks,
    wedge_insert,
)
from .linalg import (
    TolerancePolicy,
    adjoint,
    commutator,
    kron,
    min_singular_value,
    numerical_rank,
)
from .spectrum import (
    DEFAULT_DIMENSION_CAP,
    CheckReport,
    MatchReport,
    MembershipDiagnostics,
    SpectralPoint,
    SpectrumResult,
    check_ideal_projection,
    check_product_factorization,
    check_tensor_embedding,
    compute_spectrum,
    contains,
    match_character_sets,
    project_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "CharacterError",
    "CheckReport",
    "ClosureError",
    "DEFAULT_DIMENSION_CAP",
    "EmptySpectrumError",
    "Ideal",
    "InputValidationError",
    "KoszulComplex",
    "MatchReport",
    "MembershipDiagnostics",
    "NumericalInconsistencyError",
    "OperatorLieAlgebra",
    "ProblemFileError",
    "SizeLimitError",
    "SolvabilityError",
    "SpectralPoint",
    "SpectrumResult",
    "SpectrumToolError",
    "TolerancePolicy",
    "TriangularizationError",
    "adjoint",
    "boundary_matrix",
    "build_algebra",
    "build_complex",
    "character_space_basis",
    "check_ideal_projection",
    "check_product_factorization",
    "check_tensor_embedding",
    "close_under_bracket",
    "commutator",
    "compute_spectrum",
    "contains",
    "dedup_characters",
    "degree_sign_matrix",
    "derived_subalgebra",
    "direct_product",
    "exterior_basis",
    "hodge_extremes",
    "hodge_operator",
    "homology_dimensions",
    "identity_kron",
    "is_character",
    "join_character",
    "kron",
    "kron_with_identity",
    "match_character_sets",
    "min_singular_value",
    "numerical_rank",
    "project_spectrum",
    "regroup_right_factor_map",
    "sort_characters",
    "split_character",
    "split_product_blocks",
    "split_product_map",
    "swap_factors_blocks",
    "swap_factors_map",
    "tensor_boundary_blocks",
    "triangularize",
    "wedge_insert",
]
