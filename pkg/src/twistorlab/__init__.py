"""Residual twistor data for logarithmic lambda-connections on punctured curves.

The package computes with the asymptotic (residual) data of such families:
KMS weight/eigenvalue flows and their gauge action, the groupoid of Hecke
shifts and eigenvalue swaps acting on residual points, the multiplicative
Betti shadow, splitting types of bundles on the projective line with a mixed
twistor checker, invariant sections of the degree-2 twistor line bundle, and
the disk-by-disk assembly of preferred sections with cocycle verification.
"""

from .betti import (
    BettiElement,
    BettiResidualPoint,
    apply_betti,
    betti_map,
    connected_in_betti,
    functor_on_element,
    rank1_rh,
)
from .bundles import (
    EXACT_RANK_LIMIT,
    BlockReport,
    BundleOnP1,
    FilteredBundle,
    LaurentMatrix,
    MixedTwistorReport,
    SplittingType,
    check_mixed_twistor,
    det_winding,
    graded_pieces,
    h0,
    is_pure_weight,
    sigma_fixed_check,
    splitting_type,
)
from .groupoid import (
    ALPHABET,
    EVERYWHERE,
    IDENTITY,
    LETTER_H,
    LETTER_H_INV,
    LETTER_P,
    Domain,
    GroupoidElement,
    NormalForm,
    ResidualPoint,
    SemanticTriple,
    apply,
    canonical_domain,
    canonical_element,
    compose,
    connecting_element,
    element_of_word,
    graphs_disjoint,
    invert,
    multi_apply,
    normalize,
)
from .kms import (
    INFINITY_CHART,
    ZERO_CHART,
    KmsElement,
    KmsPair,
    LambdaPoint,
    check_hypothesis3,
    conjugate_kms,
    distinct_mod_gauge,
    hecke_shift,
    parabolic_weight,
    recover_kms,
    residue_eigenvalue,
)
from .rank1 import (
    FiberSplit,
    InvariantSection,
    from_coefficients,
    glue_chart_point,
    kernel_of_restriction,
    o2_transition,
    restrict,
    section_from_kms,
    section_from_split,
    split_at,
)
from .scalars import GaussianRational, exact_real, exact_scalar, is_exact
from .sections import (
    CASE_A,
    CASE_B,
    DEFAULT_SEED,
    AssembleError,
    BranchDescriptor,
    CaseTag,
    ChartDisk,
    CocycleReport,
    CollisionLocus,
    DichotomyReport,
    DiskChoice,
    DiskTooLargeError,
    SectionAtlas,
    SurfaceData,
    assemble,
    branch_eigenvalue,
    branch_weight,
    classify_disk,
    collision_locus,
    default_cover,
    dichotomy_scan,
    resonance_points,
    to_zero_chart,
    verify_cocycle,
    weight_graded_dims,
    zero_chart_region,
)

__version__ = "0.1.0"
