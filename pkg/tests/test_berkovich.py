from fractions import Fraction

import pytest

from mumford_trop.berkovich import (
    join,
    overlap,
    path,
    path_distance,
    project,
    segment_gap,
    zeta,
)
from mumford_trop.valued_field import parse_puiseux as P


def test_equality_ignores_choice_of_center():
    assert zeta(P("t^2"), -1) == zeta(P("t^2 + t^3"), -1)
    assert zeta(P("0"), -1) == zeta(P("t^2"), -1)
    assert zeta(P("0"), -1) == zeta(P("t"), -1)
    assert zeta(P("0"), -2) != zeta(P("t"), -2)
    assert zeta(P("0"), -1) != zeta(P("0"), -2)
    assert len({zeta(P("0"), -1), zeta(P("t^5"), -1)}) == 1


def test_join_and_distance():
    x, y = zeta(P("t^4"), -5), zeta(P("t^2"), -3)
    assert join(x, y) == zeta(P("0"), -2)
    assert path_distance(x, y) == 4
    assert path_distance(x, x) == 0
    # nested discs: the larger one is the join
    assert join(zeta(P("t^3"), -5), zeta(P("0"), -1)) == zeta(P("0"), -1)
    assert path_distance(zeta(P("t^3"), -5), zeta(P("0"), -1)) == 4


def test_path_point_at_and_contains():
    p = path(zeta(P("t^4"), -5), zeta(P("t^2"), -3))
    assert p.length == 4
    assert p.apex == zeta(P("0"), -2)
    assert p.point_at(0) == p.start and p.point_at(4) == p.end
    assert p.point_at(2) == zeta(P("t^4"), -3)
    assert p.point_at(Fraction(7, 2)) == zeta(P("t^2"), Fraction(-5, 2))
    assert p.contains(zeta(P("t^3"), -3))
    assert not p.contains(zeta(P("t"), -1))
    with pytest.raises(ValueError):
        p.point_at(5)


def test_project():
    p = path(zeta(P("t^4"), -5), zeta(P("t^2"), -3))
    assert project(p, zeta(P("t^3"), -6)) == zeta(P("t^3"), -3)
    assert project(p, zeta(P("1"), 0)) == p.apex


def test_shared_segment_of_se1_cycles(S_se1):
    p1 = path(zeta(S_se1.b(1), S_se1.r_plus(1)), zeta(S_se1.c(1), S_se1.r_minus(1)))
    p2 = path(zeta(S_se1.b(2), S_se1.r_plus(2)), zeta(S_se1.c(2), S_se1.r_minus(2)))
    length, u, w = overlap(p1, p2)
    assert length == 1
    assert {u, w} == {zeta(P("0"), -3), zeta(P("0"), -2)}
    gap, a, b = segment_gap(p1, p2)
    assert gap == 0 and a == b


def test_bridge_of_ce1(S_ce1):
    p1 = path(zeta(S_ce1.b(1), S_ce1.r_plus(1)), zeta(S_ce1.c(1), S_ce1.r_minus(1)))
    p2 = path(zeta(S_ce1.b(2), S_ce1.r_plus(2)), zeta(S_ce1.c(2), S_ce1.r_minus(2)))
    gap, a, b = segment_gap(p1, p2)
    assert gap == 2
    assert a == zeta(P("0"), -3)
    assert b == zeta(P("0"), -1)
    assert path_distance(a, b) == gap
    assert overlap(p1, p2) is None


def test_paths_touching_in_a_point(S_cp1):
    p1 = path(zeta(S_cp1.b(1), S_cp1.r_plus(1)), zeta(S_cp1.c(1), S_cp1.r_minus(1)))
    p2 = path(zeta(S_cp1.b(2), S_cp1.r_plus(2)), zeta(S_cp1.c(2), S_cp1.r_minus(2)))
    gap, a, b = segment_gap(p1, p2)
    assert gap == 0 and a == b
    assert overlap(p1, p2)[0] == 0
