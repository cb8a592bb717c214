"""Type-2 points of the Berkovich line and the path metric between them.

A point ``zeta(a, r)`` stands for the closed disc of center ``a`` and
log-radius ``r``.  Different centers can name the same point, so equality is
the disc-equality predicate rather than a comparison of fields.  The points
form an R-tree; everything here (joins, geodesics, the gap between two
geodesics) is read off from four-point distances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .moebius import log_le
from .valued_field import PuiseuxNumber, log_abs


@dataclass(frozen=True, eq=False)
class TypeTwoPoint:
    center: PuiseuxNumber
    log_radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", PuiseuxNumber.coerce(self.center))
        object.__setattr__(self, "log_radius", Fraction(self.log_radius))

    def __eq__(self, other):
        if not isinstance(other, TypeTwoPoint):
            return NotImplemented
        return (self.log_radius == other.log_radius
                and log_le(self.center - other.center, self.log_radius))

    def __hash__(self):
        # equal points always share the radius
        return hash(self.log_radius)

    def __repr__(self):
        return f"zeta({self.center}, {self.log_radius})"


def zeta(center, log_radius) -> TypeTwoPoint:
    return TypeTwoPoint(PuiseuxNumber.coerce(center), Fraction(log_radius))


def _apex_radius(x: TypeTwoPoint, y: TypeTwoPoint) -> Fraction:
    m = max(x.log_radius, y.log_radius)
    diff = x.center - y.center
    if log_le(diff, m):
        return m
    return log_abs(diff)


def join(x: TypeTwoPoint, y: TypeTwoPoint) -> TypeTwoPoint:
    """Smallest disc containing both discs."""
    return TypeTwoPoint(x.center, _apex_radius(x, y))


def path_distance(x: TypeTwoPoint, y: TypeTwoPoint) -> Fraction:
    R = _apex_radius(x, y)
    return 2 * R - x.log_radius - y.log_radius


@dataclass(frozen=True)
class TreePath:
    """Geodesic from ``start`` up to the apex radius ``R`` and down to
    ``end``."""

    start: TypeTwoPoint
    end: TypeTwoPoint
    R: Fraction

    @property
    def rising(self) -> tuple[TypeTwoPoint, TypeTwoPoint]:
        return self.start, TypeTwoPoint(self.start.center, self.R)

    @property
    def falling(self) -> tuple[TypeTwoPoint, TypeTwoPoint]:
        return TypeTwoPoint(self.end.center, self.R), self.end

    @property
    def apex(self) -> TypeTwoPoint:
        return self.rising[1]

    @property
    def length(self) -> Fraction:
        return 2 * self.R - self.start.log_radius - self.end.log_radius

    def point_at(self, delta) -> TypeTwoPoint:
        """The point at distance ``delta`` from ``start``."""
        delta = Fraction(delta)
        if not 0 <= delta <= self.length:
            raise ValueError(f"distance {delta} outside [0, {self.length}]")
        up = self.R - self.start.log_radius
        if delta <= up:
            return TypeTwoPoint(self.start.center, self.start.log_radius + delta)
        return TypeTwoPoint(self.end.center, self.R - (delta - up))

    def contains(self, p: TypeTwoPoint) -> bool:
        return (path_distance(self.start, p) + path_distance(p, self.end)
                == self.length)


def path(x: TypeTwoPoint, y: TypeTwoPoint) -> TreePath:
    return TreePath(x, y, _apex_radius(x, y))


def project(p: TreePath, z: TypeTwoPoint) -> TypeTwoPoint:
    """Nearest point of the geodesic ``p`` to ``z``."""
    d = path_distance
    delta = (d(p.start, z) + p.length - d(p.end, z)) / 2
    return p.point_at(delta)


def _four_point(p1: TreePath, p2: TreePath) -> Fraction:
    d = path_distance
    cross = (d(p1.start, p2.start) + d(p1.start, p2.end)
             + d(p1.end, p2.start) + d(p1.end, p2.end))
    return (cross - 2 * p1.length - 2 * p2.length) / 4


def segment_gap(p1: TreePath, p2: TreePath) -> tuple[Fraction, TypeTwoPoint, TypeTwoPoint]:
    """Distance between two geodesics with a nearest pair of points.

    When the geodesics meet the gap is 0 and both witnesses are the same
    common point; use :func:`overlap` for the full common segment.
    """
    g = _four_point(p1, p2)
    if g > 0:
        return g, project(p1, p2.start), project(p2, p1.start)
    u = project(p1, p2.start)
    return Fraction(0), u, u


def overlap(p1: TreePath, p2: TreePath) -> tuple[Fraction, TypeTwoPoint, TypeTwoPoint] | None:
    """Common segment of two geodesics as ``(length, u, w)``, or None if
    they are disjoint."""
    g = _four_point(p1, p2)
    if g > 0:
        return None
    return -2 * g, project(p1, p2.start), project(p1, p2.end)
