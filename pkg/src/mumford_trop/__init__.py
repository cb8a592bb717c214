"""Exact skeletons, Jacobians and faithful tropicalizations of genus-2
Mumford curves over a field of generalized power series."""

from .berkovich import TreePath, TypeTwoPoint, join, path, path_distance, segment_gap, zeta
from .faithful import (
    Divisor,
    FaithfulnessReport,
    MarkedSkeleton,
    SlopeSolution,
    TropicalCurve,
    UnsupportedError,
    build_coordinate_functions,
    build_tropical_curve,
    check_assumption,
    check_faithful,
    divisor_is_tropically_principal,
    place_marked_points,
    solve_slope_field,
    tropicalize,
)
from .moebius import (
    Disc,
    MoebiusMap,
    PeriodMatrix,
    SchottkyRank2,
    hyperbolic_generator,
    log_q,
    normalize,
    u_log_abs,
    u_log_abs_truncated,
    verify_good_domain,
)
from .skeleton import (
    MetricSkeleton,
    SkeletonKind,
    SkeletonPoint,
    TorusPoint,
    TropLattice,
    build_skeleton,
    check_mu_cycle_isometry,
    mu,
    reduce_mod_lattice,
    two_summand_decomposition,
)
from .valued_field import (
    PrecisionError,
    PuiseuxNumber,
    log_abs,
    parse_puiseux,
    vf_add,
    vf_inv,
    vf_mul,
    working_precision,
)

__version__ = "0.1.0"
