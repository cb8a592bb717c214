import random
from fractions import Fraction

from hypothesis import assume, given, strategies as st

from mumford_trop.berkovich import join, path, path_distance, zeta
from mumford_trop.faithful import (
    build_coordinate_functions,
    build_tropical_curve,
    check_faithful,
    divisor_is_tropically_principal,
    place_marked_points,
    solve_slope_field,
)
from mumford_trop.moebius import Disc, MoebiusMap, PoleInDiscError, image_of_disc, moebius_apply
from mumford_trop.oracles import random_divisor, random_principal_divisor, slope_field_laws
from mumford_trop.skeleton import MetricSkeleton, SkeletonKind, TropLattice
from mumford_trop.valued_field import (
    PuiseuxNumber,
    format_puiseux,
    log_abs,
    parse_puiseux,
    vf_inv,
)

F = Fraction

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)


@st.composite
def puiseux(draw, nonzero=False, max_terms=4):
    pairs = draw(st.lists(st.tuples(small, coeffs), max_size=max_terms,
                          min_size=1 if nonzero else 0))
    x = PuiseuxNumber.from_terms(pairs)
    if nonzero:
        assume(not x.is_zero())
    return x


# -- field -------------------------------------------------------------------

@given(puiseux(), puiseux())
def test_ultrametric(x, y):
    assume(not (x + y).is_zero())
    assert log_abs(x + y) <= max(log_abs(x) if not x.is_zero() else -10**9,
                                 log_abs(y) if not y.is_zero() else -10**9)


@given(puiseux(nonzero=True), puiseux(nonzero=True))
def test_log_abs_is_a_homomorphism(x, y):
    assert log_abs(x * y) == log_abs(x) + log_abs(y)


@given(puiseux(), puiseux(), puiseux())
def test_ring_laws(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x - x).is_zero()


@given(puiseux(nonzero=True))
def test_inverse(x):
    one = x * vf_inv(x)
    assert one.agrees_with(PuiseuxNumber.const(1))
    assert log_abs(vf_inv(x)) == -log_abs(x)


@given(puiseux())
def test_format_parse_round_trip(x):
    assert parse_puiseux(format_puiseux(x)) == x


# -- Berkovich tree -----------------------------------------------------------

points = st.builds(zeta, puiseux(max_terms=2), st.integers(-6, 2))


@given(points, points, points)
def test_path_distance_is_a_metric(x, y, z):
    d = path_distance
    assert d(x, x) == 0
    assert d(x, y) == d(y, x) >= 0
    assert (d(x, y) == 0) == (x == y)
    assert d(x, z) <= d(x, y) + d(y, z)


@given(st.lists(points, min_size=4, max_size=4))
def test_four_point_condition(ps):
    w, x, y, z = ps
    d = path_distance
    sums = sorted([d(w, x) + d(y, z), d(w, y) + d(x, z), d(w, z) + d(x, y)])
    # the two largest agree in a tree
    assert sums[1] == sums[2]


@given(points, points, points)
def test_join(x, y, z):
    assert join(x, y) == join(y, x)
    assert join(join(x, y), z) == join(x, join(y, z))
    m = join(x, y)
    assert path_distance(x, m) + path_distance(m, y) == path_distance(x, y)
    assert path(x, y).contains(m)


# -- Moebius maps -------------------------------------------------------------

@st.composite
def moebius_maps(draw):
    a, b, c, d = (draw(puiseux(max_terms=2)) for _ in range(4))
    assume(not (a * d - b * c).is_zero())
    return MoebiusMap(a, b, c, d)


discs = st.builds(Disc, puiseux(max_terms=2), st.integers(-5, 1))


@given(moebius_maps(), moebius_maps(), discs)
def test_disc_images_compose(m1, m2, D):
    try:
        D1 = image_of_disc(m1, D)
        D2 = image_of_disc(m2, D1)
    except PoleInDiscError:
        assume(False)
    assert image_of_disc(m2 @ m1, D).same_as(D2)


@given(moebius_maps(), discs, coeffs)
def test_boundary_maps_to_boundary(m, D, c):
    try:
        img = image_of_disc(m, D)
    except PoleInDiscError:
        assume(False)
    z = D.center + PuiseuxNumber.monomial(-D.log_radius, c)
    w = moebius_apply(m, z)
    assert img.contains(w)


# -- lattices and skeletons ---------------------------------------------------

quarters = st.integers(1, 40).map(lambda k: F(k, 4))


@st.composite
def skeletons(draw):
    kind = draw(st.sampled_from(list(SkeletonKind)))
    if kind is SkeletonKind.SHARED_EDGE:
        ell = draw(quarters)
        L1 = 2 * ell + draw(quarters)
        L2 = 2 * ell + draw(quarters)
    else:
        L1, L2 = draw(quarters), draw(quarters)
        ell = draw(quarters) if kind is SkeletonKind.CONNECTING_EDGE else 0
    return MetricSkeleton(kind, L1, L2, ell)


@given(skeletons(), small, small, st.integers(-3, 3), st.integers(-3, 3))
def test_reduce_is_periodic(skel, x, y, m, n):
    lat = skel.lattice
    r = lat.reduce((x, y))
    shifted = (x + m * lat.lam1[0] + n * lat.lam2[0], y + m * lat.lam1[1] + n * lat.lam2[1])
    assert lat.reduce(shifted) == r
    assert lat.reduce(r.rep) == r
    assert lat.contains((x - r.rep[0], y - r.rep[1]))


@given(skeletons(), st.randoms(use_true_random=False))
def test_principal_divisors_have_integral_slopes(skel, rnd):
    rng = random.Random(rnd.random())
    msk = place_marked_points(skel)
    div = random_principal_divisor(skel, F(1, 4), rng)
    assume(div.entries)
    assert divisor_is_tropically_principal(msk, div)
    sol = solve_slope_field(msk, div)
    assert sol.integral
    assert slope_field_laws(sol).ok


@given(skeletons(), st.randoms(use_true_random=False))
def test_integrality_iff_principal(skel, rnd):
    rng = random.Random(rnd.random())
    msk = place_marked_points(skel)
    div = random_divisor(skel, F(1, 4), rng, size=rng.randint(1, 3))
    assume(div.entries)
    sol = solve_slope_field(msk, div)
    assert slope_field_laws(sol).ok
    assert sol.integral == divisor_is_tropically_principal(msk, div)


@given(skeletons())
def test_coordinate_functions_balanced_and_faithful(skel):
    msk = place_marked_points(skel)
    divs = build_coordinate_functions(msk)
    extra = set().union(*(d.support for d in divs))
    sols = [solve_slope_field(msk, d, extra) for d in divs]
    for sol in sols:
        assert sol.integral and slope_field_laws(sol).ok
    c2 = build_tropical_curve(msk, sols[:2])
    c3 = build_tropical_curve(msk, sols)
    assert c2.balanced and c3.balanced
    assert check_faithful(c2, msk).skeleton_faithful
    assert check_faithful(c3, msk).extended_faithful
