from fractions import Fraction

import pytest

from mumford_trop.geometry import Piece, intersect, parallel
from mumford_trop.linalg import InconsistentSystemError, SingularSystemError, solve_exact

F = Fraction


def seg(base, d, tmax):
    return Piece(tuple(map(F, base)), tuple(d), F(tmax))


def ray(base, d):
    return Piece(tuple(map(F, base)), tuple(d), None)


def test_parallel():
    assert parallel((1, 2), (-2, -4))
    assert not parallel((1, 0, 0), (0, 1, 0))


def test_crossing_rays():
    assert intersect(ray((-1, -1), (-1, 0)), ray((-2, 0), (0, -1))) == ("point", (-2, -1))
    assert intersect(ray((-1, -1), (1, 0)), ray((-2, 0), (0, -1))) is None


def test_segment_misses_by_length():
    assert intersect(seg((0, 0), (1, 0), 1), seg((2, -1), (0, 1), 2)) is None
    assert intersect(seg((0, 0), (1, 0), 2), seg((2, -1), (0, 1), 2)) == ("point", (2, 0))


def test_collinear_overlaps():
    assert intersect(seg((0, 0), (1, 1), 2), seg((1, 1), (1, 1), 5)) == (
        "interval", (1, 1), (2, 2))
    assert intersect(ray((0, 0), (1, 0)), ray((3, 0), (1, 0))) == ("interval", (3, 0), None)
    assert intersect(ray((0, 0), (1, 0)), ray((3, 0), (-1, 0))) == ("interval", (0, 0), (3, 0))
    assert intersect(ray((0, 0), (1, 0)), ray((-1, 0), (-1, 0))) is None
    # touching end to end is a single point
    assert intersect(seg((0, 0), (1, 0), 1), seg((1, 0), (1, 0), 1)) == ("point", (1, 0))


def test_skew_lines_in_space():
    assert intersect(ray((0, 0, 0), (1, 0, 0)), ray((1, 1, 1), (0, -1, 0))) is None
    assert intersect(ray((0, 0, 1), (1, 0, 0)), ray((1, 1, 1), (0, -1, 0))) == (
        "point", (1, 0, 1))


def test_degenerate_pieces():
    p = seg((1, 1), (1, 0), 0)
    assert intersect(p, ray((0, 1), (1, 0))) == ("point", (1, 1))
    assert intersect(ray((0, 0), (0, 0, )), p) is None


def test_solve_exact():
    assert solve_exact([[2, 1], [1, 3]], [3, 5]) == [F(4, 5), F(7, 5)]
    # overdetermined but consistent
    assert solve_exact([[1, 0], [0, 1], [1, 1]], [F(1, 2), 2, F(5, 2)]) == [F(1, 2), 2]


def test_solve_exact_failures():
    with pytest.raises(InconsistentSystemError):
        solve_exact([[1, 1], [1, 1]], [0, 1])
    with pytest.raises(SingularSystemError):
        solve_exact([[1, 1], [2, 2]], [1, 2])
