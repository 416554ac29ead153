"""Classification and verification of projectively rigid torsion quadruples.

A quadruple of torsion points of an elliptic curve, pushed down to the
projective line by the standard double cover, usually has a cross ratio that
varies with the curve.  This package searches exhaustively for the finitely
many exceptional families up to a given order, verifies the constancy of
their invariants through truncated q-expansions, theta products and two
explicit curve models, and computes the congruence subgroups attached to a
quadruple's modular function.
"""

from .torsion_coords import (
    DuplicatePointError,
    Quad,
    QuadParseError,
    Rat,
    TorsionCoord,
    format_quad,
    mod1,
    parse_quad,
    points_of_exact_order,
    points_of_order_dividing,
    reduce_pair,
    reduce_scalar,
)
from .sl2_action import (
    Mat2,
    Mat2ModN,
    SubgroupModN,
    act,
    enumerate_sl2_mod_n,
    format_matrix,
    minimal_representative,
    orbit,
    parse_matrix,
    psl_quotient_order,
    stabilizer_subgroup,
)
from .goodness import (
    ProgressionData,
    ShapeError,
    covers_all_integers,
    goodness_witness,
    harmonic_sum,
    is_good_quad,
    is_good_scalars,
    progression_data,
)
from .classifier import (
    FamilyEntry,
    MatchReport,
    classify,
    enumerate_minimal_quads,
    family_table,
    match_family_table,
)
from .qseries import (
    ConstancyReport,
    IdentityPointError,
    LaurentSeries,
    UPoint,
    ZeroSeriesError,
    a4_series,
    a6_series,
    cross_ratio_series,
    cross_ratio_value,
    is_constant,
    j6_series,
    j6_value,
    mu_series,
    mu_value,
    s_k_series,
    tate_point_residual,
    theta_product_ratio,
    theta_series,
    theta_value,
    x_diff_identity_residual,
    x_series,
    x_value,
    y_series,
    y_value,
)
from .curve_forms import (
    HessPoint,
    durand_kerner,
    hess_add,
    hess_double,
    jac_double_x,
    jac_translate,
    verify_case_10,
    verify_case_11,
    verify_cases_1_2_5,
    verify_cases_3_8_9,
    verify_cases_6_7,
)
from .modular_groups import (
    InvarianceReport,
    Level5Report,
    invariance_report,
    invariance_subgroup,
    level5_partition_check,
)

__version__ = "0.1.0"
