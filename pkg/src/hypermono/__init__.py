"""Hypergeometric monodromy groups in Sp4/SO(2,3) and their dynamics."""

from .params import (
    DegenerationClass,
    HypergeomParams,
    MIRROR_QUINTIC,
    classify_local_degeneration,
    enumerate_good_families,
    hodge_numbers,
    satisfies_assumption_a,
    satisfies_assumption_b,
)
from .monodromy import (
    CharPolyCoeffs,
    MonodromyRep,
    build_rep,
    char_polys,
    invariant_bilinear_form,
    levelt_matrices,
    monodromy_at_one,
    reflection_matrices,
    symplectic_basis,
)
from .exterior import (
    LagrangianPlane,
    QuadSpaceW,
    electron_circle,
    electron_membership,
    photon,
    pluecker,
    reduced_exterior_square,
)
from .lie import (
    CartanData,
    LimitDatum,
    alpha1_gap,
    coarse_weight_split,
    is_log_proximal,
    jacobson_morozov,
    kak,
    stable_point_test,
    strictly_adapted_norm,
    weight_filtration,
)
from .fuchsian import (
    GeodesicTrajectory,
    OrbifoldSignature,
    geodesic_sample,
    group_norm_distance,
    hyp_distance,
    orbifold_signature,
    triangle_group,
)
from .dynamics import (
    AnosovCertificate,
    LimitSample,
    WordBall,
    anosov_certificate,
    contraction_map,
    enumerate_ball,
    fiberwise_unipotent,
    limit_curve_samples,
    lyapunov_mc,
    minimality_scan,
    rational_limit_classify,
    sum_formula_report,
)

__version__ = "0.1.0"
