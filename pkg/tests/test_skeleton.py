from fractions import Fraction

import pytest

from mumford_trop.moebius import PeriodMatrix, log_q
from mumford_trop.skeleton import (
    MetricSkeleton,
    SkeletonKind,
    SkeletonPoint,
    TropLattice,
    build_skeleton,
    check_mu_cycle_isometry,
    mu,
    mu_lift,
    reduce_mod_lattice,
    two_summand_decomposition,
)

F = Fraction


def test_classification(skel_se1, skel_ce1, S_cp1):
    assert (skel_se1.kind, skel_se1.L1, skel_se1.L2, skel_se1.ell) == (
        SkeletonKind.SHARED_EDGE, 4, 6, 1)
    assert (skel_ce1.kind, skel_ce1.L1, skel_ce1.L2, skel_ce1.ell) == (
        SkeletonKind.CONNECTING_EDGE, 3, 4, 2)
    cp = build_skeleton(S_cp1, log_q(S_cp1))
    assert (cp.kind, cp.L1, cp.L2, cp.ell) == (SkeletonKind.CONNECTING_POINT, 6, 4, 0)


def test_lattice_from_period_matrix(S_se1, skel_se1):
    lat = TropLattice.from_period_matrix(log_q(S_se1))
    assert lat == skel_se1.lattice
    assert lat.lam1 == (-4, -1) and lat.lam2 == (-1, -6)
    assert lat.det == 23


def test_reduce_is_lattice_periodic(skel_se1):
    lat = skel_se1.lattice
    x = (F(5, 3), F(-7, 2))
    r = reduce_mod_lattice(x, lat)
    assert reduce_mod_lattice((x[0] + 4, x[1] + 1), lat) == r
    assert reduce_mod_lattice((x[0] - 3, x[1] + 5), lat) == r
    s, u = lat.coords(r.rep)
    assert 0 <= s < 1 and 0 <= u < 1


def test_inconsistent_period_matrix_is_caught(S_se1):
    with pytest.raises(Exception, match="tree distance"):
        build_skeleton(S_se1, PeriodMatrix(((-5, -1), (-1, -6))))
    with pytest.raises(Exception, match="overlap"):
        build_skeleton(S_se1, PeriodMatrix(((-4, -2), (-2, -6))))


def test_canonical_points(skel_se1):
    s = skel_se1
    assert s.cycle_point(1, 0) == s.shared_point(1)
    assert s.cycle_point(1, 3) == s.shared_point(0)
    assert s.cycle_point(2, 5) == s.shared_point(0)
    assert s.cycle_point(2, F(11, 2)) == s.shared_point(F(1, 2))
    assert s.cycle_point(1, 4) == s.cycle_point(1, 0)
    assert s.cycle_arc(2, s.shared_point(F(1, 2))) == F(11, 2)
    assert s.cycle_arc(2, s.cycle_point(1, 1)) is None
    with pytest.raises(ValueError):
        s.bridge_point(1)


def test_grid_sizes(skel_se1, skel_ce1):
    # 9 unit edges on a graph of genus 2
    assert len(skel_se1.grid(1)) == 8
    assert len(skel_ce1.grid(1)) == 3 + 4 + 2 - 1
    with pytest.raises(ValueError):
        skel_se1.grid(F(3, 7))


def test_mu_values(skel_se1, skel_ce1):
    s = skel_se1
    assert mu_lift(s, s.cycle_point(1, 2)) == (3, 1)
    assert mu_lift(s, s.cycle_point(2, 2)) == (1, 3)
    assert mu_lift(s, s.shared_point(F(1, 2))) == (F(1, 2), F(1, 2))
    # walking around cycle 1 closes up modulo the lattice
    assert mu(s, s.cycle_point(1, F(3))) == mu(s, s.shared_point(0))
    assert s.lattice.contains((4, 1))
    c = skel_ce1
    assert mu_lift(c, c.bridge_point(1)) == (0, 0)
    assert mu_lift(c, c.cycle_point(2, 1)) == (0, 1)


@pytest.mark.parametrize("kind, L1, L2, ell", [
    (SkeletonKind.SHARED_EDGE, 4, 6, 1),
    (SkeletonKind.SHARED_EDGE, 3, 4, 1),
    (SkeletonKind.CONNECTING_EDGE, 3, 4, 2),
    (SkeletonKind.CONNECTING_POINT, 6, 4, 0),
])
def test_mu_isometric_on_cycles(kind, L1, L2, ell):
    rep = check_mu_cycle_isometry(MetricSkeleton(kind, L1, L2, ell), F(1, 4))
    assert rep.ok, rep.failures()


def test_long_shared_edge_is_only_a_local_isometry():
    # the translate by lam2 - lam1 = (1, -3) shortcuts cycle 2
    skel = MetricSkeleton(SkeletonKind.SHARED_EDGE, 3, 5, 2)
    rep = check_mu_cycle_isometry(skel, F(1, 4))
    assert rep["cycle 1 isometry"]
    assert not rep["cycle 2 isometry"]
    assert "arcs 0 and 7/4" in rep.failures()[0][2]
    lat, step = skel.lattice, F(1, 4)
    for i in (1, 2):
        arcs = [k * step for k in range(int(skel.L(i) / step) + 1)]
        imgs = [mu_lift(skel, skel.cycle_point(i, a)) for a in arcs]
        assert all(lat.torus_distance(x, y) == step for x, y in zip(imgs, imgs[1:]))


def test_isometry_failure_is_reported():
    # a lattice that does not match the skeleton lengths
    class Wrong(MetricSkeleton):
        @property
        def lattice(self):
            return TropLattice((-2, 0), (0, -6))
    rep = check_mu_cycle_isometry(Wrong(SkeletonKind.CONNECTING_EDGE, 4, 6, 1), 1)
    assert not rep.ok
    assert "cycle 1" in rep.failures()[0][0]


def test_two_summand_decomposition(skel_se1):
    s = skel_se1
    S, T = two_summand_decomposition(s.lattice, s, (2 + F(1, 2), 2 + 4))
    assert S == s.cycle_point(1, F(1, 2)) and T == s.cycle_point(2, 4)
    # a lattice translate of the target gives the same answer
    assert two_summand_decomposition(s.lattice, s, (F(5, 2) - 4, 6 - 1)) == (S, T)


def test_two_summand_rejects_boundary(skel_se1):
    s = skel_se1
    with pytest.raises(ValueError, match="decomposition hypotheses"):
        two_summand_decomposition(s.lattice, s, (2, 2 + 1))


def test_skeleton_validation():
    with pytest.raises(ValueError):
        MetricSkeleton(SkeletonKind.SHARED_EDGE, 4, 6, 4)
    with pytest.raises(ValueError):
        MetricSkeleton(SkeletonKind.CONNECTING_EDGE, 4, 6, 0)
    with pytest.raises(ValueError):
        MetricSkeleton(SkeletonKind.CONNECTING_POINT, 4, 6, 1)
    assert isinstance(MetricSkeleton(SkeletonKind.CONNECTING_POINT, 4, 6, 0).base_vertex,
                      SkeletonPoint)
