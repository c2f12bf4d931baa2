"""Exact-arithmetic engine for abelian vortex moduli spaces and gauged
linear models: stability verdicts, moduli dimensions, cohomology models,
Kahler classes, volumes, and scalar curvatures, all over the ring Q[pi].
"""

from .cohomring import (
    RingElement,
    RingPresentation,
    exterior_presentation,
    fibre_integrate,
    formal_series,
    tensor_presentation,
    transport,
    truncated_polynomial_presentation,
)
from .cones import (
    SquareDecomposition,
    StabilityThreshold,
    WeightSystem,
    check_C1,
    check_C2,
    constant_sigma,
    generates_lattice,
    hk_is_stable,
    in_cone_closed,
    in_cone_interior,
    is_simple,
    minimal_support,
    sigma_decomposition_square,
    sigma_vector,
    stability_threshold,
)
from .errors import (
    ConsistencyError,
    DomainError,
    ModelError,
    NonNilpotentError,
    NoThresholdError,
    NotFoundError,
    NotOpenDenseError,
    ParseError,
    PresentationMismatchError,
    SubsetLimitError,
    UnsupportedKindError,
    UnsupportedManifoldError,
    VortexError,
)
from .fourier_mukai import (
    AbelianVarietyData,
    ch_transform,
    chern_closed_form,
    chern_from_character,
    fm_kahler_power,
    r_sections_abelian,
    recursion_check,
    segre,
    segre_pushforward,
)
from .geometry import (
    AbelianVariety,
    Bidegree,
    BundleDescriptor,
    Degree,
    DeltaVector,
    GenericPicZ,
    GenericSimplyConnected,
    Grassmannian,
    Hirzebruch,
    ManifoldDescriptor,
    ProjectiveSpace,
    TableIndex,
    r_sections,
    t_number,
    volume_and_slope,
)
from .maps import (
    BundleData,
    ToricTarget,
    UnstablePlane,
    embedding_open_dense,
    maps_volume_conjectural,
    s_invariant,
    unstable_planes,
)
from .metrics import (
    KahlerClassReport,
    constrained_volume,
    kahler_class,
    strong_coupling_limit,
    total_scalar_curvature,
    volume_moduli,
    vortex_energy,
)
from .moduli import (
    GlsmModel,
    ModuliDescription,
    PointKind,
    ProjectiveBundleKind,
    ProjectiveSpaceKind,
    ToricFibrationKind,
    ToricOrbifoldKind,
    Verdict,
    build_moduli,
    moduli_dimension_glsm,
    projective_bundle_presentation,
)
from .scalars import PI, PiPoly, Sign, pi_enclosure, pp_add, pp_approx, pp_mul, pp_sign

__version__ = "0.1.0"
