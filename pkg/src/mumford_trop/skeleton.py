"""Genus-two skeletons, the tropical Jacobian and the map mu into it.

Conventions.  For two cycles sharing an edge, ``X0`` is the shared-edge
endpoint with ``mu = v = (ell, ell)`` and ``X1`` the other one (``mu = 0``).
The shared edge is parameterized from ``X1`` (offset 0) to ``X0`` (offset
``ell``) and maps to ``offset * (1, 1)``; the private part of cycle ``i``
starts at ``X0`` and maps to ``v + arc * e_i``.  When the cycles are joined
by a bridge (or meet in a point, ``ell = 0``), cycle ``i`` starts at its
bridge endpoint and maps to ``arc * e_i`` while the whole bridge maps to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product

from . import berkovich as bk
from .moebius import PeriodMatrix, SchottkyRank2, VerificationReport

Vec = tuple[Fraction, Fraction]


class InconsistencyError(RuntimeError):
    """The period matrix and the tree geometry disagree."""


class SkeletonKind(Enum):
    SHARED_EDGE = "SharedEdge"
    CONNECTING_EDGE = "ConnectingEdge"
    CONNECTING_POINT = "ConnectingPoint"


def vec(x, y) -> Vec:
    return Fraction(x), Fraction(y)


def vadd(x: Vec, y: Vec) -> Vec:
    return x[0] + y[0], x[1] + y[1]


def vsub(x: Vec, y: Vec) -> Vec:
    return x[0] - y[0], x[1] - y[1]


def vscale(c, x: Vec) -> Vec:
    return c * x[0], c * x[1]


def max_norm(x: Vec) -> Fraction:
    return max(abs(x[0]), abs(x[1]))


# -- lattice ---------------------------------------------------------------

@dataclass(frozen=True)
class TorusPoint:
    """Canonical representative of a point of R^2 / Lambda."""

    rep: Vec

    def __str__(self):
        return f"({self.rep[0]}, {self.rep[1]})"


@dataclass(frozen=True)
class TropLattice:
    lam1: Vec
    lam2: Vec

    def __post_init__(self):
        object.__setattr__(self, "lam1", vec(*self.lam1))
        object.__setattr__(self, "lam2", vec(*self.lam2))
        if self.det == 0:
            raise ValueError("lattice basis is degenerate")

    @classmethod
    def from_period_matrix(cls, Q: PeriodMatrix) -> TropLattice:
        return cls((Q[1, 1], Q[1, 2]), (Q[2, 1], Q[2, 2]))

    @property
    def det(self) -> Fraction:
        return self.lam1[0] * self.lam2[1] - self.lam1[1] * self.lam2[0]

    def coords(self, x: Vec) -> Vec:
        """``(s, u)`` with ``x = s * (-lam1) + u * (-lam2)``."""
        a, b = self.lam1
        c, d = self.lam2
        s = (x[0] * d - x[1] * c) / self.det
        u = (a * x[1] - b * x[0]) / self.det
        return -s, -u

    def combine(self, s, u) -> Vec:
        return vadd(vscale(-s, self.lam1), vscale(-u, self.lam2))

    def reduce(self, x) -> TorusPoint:
        if isinstance(x, TorusPoint):
            return x
        s, u = self.coords(vec(*x))
        return TorusPoint(self.combine(s - math.floor(s), u - math.floor(u)))

    def contains(self, x: Vec) -> bool:
        s, u = self.coords(vec(*x))
        return s.denominator == 1 and u.denominator == 1

    def translates(self, x: Vec, radius: int = 2):
        for m, n in product(range(-radius, radius + 1), repeat=2):
            yield vadd(x, vadd(vscale(m, self.lam1), vscale(n, self.lam2)))

    def torus_distance(self, x: Vec, y: Vec, radius: int = 2) -> Fraction:
        """Max-metric distance between the classes of ``x`` and ``y``."""
        return min(max_norm(d) for d in self.translates(vsub(x, y), radius))


def reduce_mod_lattice(x, lattice: TropLattice) -> TorusPoint:
    return lattice.reduce(x)


# -- skeleton --------------------------------------------------------------

@dataclass(frozen=True, order=True)
class SkeletonPoint:
    """``locus`` is "cycle" (``index`` 1 or 2, ``coord`` = arc), "shared" or
    "bridge" (``coord`` = offset).  Use the factory methods of
    :class:`MetricSkeleton` to get canonical forms."""

    locus: str
    index: int
    coord: Fraction

    def __str__(self):
        if self.locus == "cycle":
            return f"cycle {self.index} arc {self.coord}"
        return f"{self.locus} offset {self.coord}"


@dataclass(frozen=True)
class MetricSkeleton:
    kind: SkeletonKind
    L1: Fraction
    L2: Fraction
    ell: Fraction

    def __post_init__(self):
        for name in ("L1", "L2", "ell"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.L1 <= 0 or self.L2 <= 0:
            raise ValueError("cycle lengths must be positive")
        if self.kind is SkeletonKind.SHARED_EDGE:
            if not 0 < self.ell < min(self.L1, self.L2):
                raise ValueError("shared edge must be shorter than both cycles")
        elif self.kind is SkeletonKind.CONNECTING_EDGE:
            if self.ell <= 0:
                raise ValueError("bridge length must be positive")
        elif self.ell != 0:
            raise ValueError("cycles meeting in a point have ell = 0")

    @property
    def shared(self) -> bool:
        return self.kind is SkeletonKind.SHARED_EDGE

    def L(self, i: int) -> Fraction:
        return self.L1 if i == 1 else self.L2

    def private_length(self, i: int) -> Fraction:
        """Length of the part of cycle ``i`` not on the shared edge."""
        return self.L(i) - self.ell if self.shared else self.L(i)

    @property
    def v(self) -> Vec:
        return (self.ell, self.ell) if self.shared else vec(0, 0)

    @property
    def lattice(self) -> TropLattice:
        off = -self.ell if self.shared else Fraction(0)
        return TropLattice((-self.L1, off), (off, -self.L2))

    # canonical points

    def cycle_point(self, i: int, arc) -> SkeletonPoint:
        arc = Fraction(arc) % self.L(i)
        if self.shared:
            if arc == 0:
                return self.shared_point(self.ell)
            if arc >= self.private_length(i):
                return self.shared_point(arc - self.private_length(i))
        elif arc == 0 and i == 2 and self.ell == 0:
            return SkeletonPoint("cycle", 1, Fraction(0))
        return SkeletonPoint("cycle", i, arc)

    def shared_point(self, offset) -> SkeletonPoint:
        offset = Fraction(offset)
        if not self.shared or not 0 <= offset <= self.ell:
            raise ValueError(f"no shared-edge point at offset {offset}")
        return SkeletonPoint("shared", 0, offset)

    def bridge_point(self, offset) -> SkeletonPoint:
        offset = Fraction(offset)
        if self.shared or not 0 <= offset <= self.ell:
            raise ValueError(f"no bridge point at offset {offset}")
        if offset == 0:
            return SkeletonPoint("cycle", 1, Fraction(0))
        if offset == self.ell:
            return self.cycle_point(2, 0)
        return SkeletonPoint("bridge", 0, offset)

    @property
    def base_vertex(self) -> SkeletonPoint:
        return self.cycle_point(1, 0)

    def cycle_arc(self, i: int, p: SkeletonPoint) -> Fraction | None:
        """Arc coordinate of ``p`` on cycle ``i``, or None if ``p`` is not
        on that cycle."""
        if p.locus == "cycle":
            if p.index == i:
                return p.coord
            if p.coord == 0 and self.ell == 0 and not self.shared:
                return Fraction(0)
            return None
        if p.locus == "shared":
            if p.coord == self.ell:
                return Fraction(0)
            return self.private_length(i) + p.coord
        return None

    def grid(self, step) -> list[SkeletonPoint]:
        """All canonical points at multiples of ``step`` along every edge."""
        step = Fraction(step)
        pts = set()
        for i in (1, 2):
            n = self.L(i) / step
            if n.denominator != 1:
                raise ValueError("grid step must divide the cycle lengths")
            pts.update(self.cycle_point(i, k * step) for k in range(int(n)))
        if not self.shared and self.ell > 0:
            n = self.ell / step
            if n.denominator != 1:
                raise ValueError("grid step must divide the bridge length")
            pts.update(self.bridge_point(k * step) for k in range(int(n) + 1))
        return sorted(pts)


def build_skeleton(S: SchottkyRank2, Q: PeriodMatrix) -> MetricSkeleton:
    """Skeleton type and lengths from the period matrix, cross-checked
    against the geodesics ``[zeta_i+, zeta_i-]`` in the Berkovich tree."""
    L1, L2 = -Q[1, 1], -Q[2, 2]
    paths = []
    for i in (1, 2):
        p = bk.path(bk.zeta(S.b(i), S.r_plus(i)), bk.zeta(S.c(i), S.r_minus(i)))
        if p.length != -Q[i, i]:
            raise InconsistencyError(
                f"cycle {i}: tree distance {p.length} != -log|q_{i}{i}| = {-Q[i, i]}")
        paths.append(p)
    if Q[1, 2] < 0:
        ov = bk.overlap(*paths)
        length = ov[0] if ov else Fraction(0)
        if length != -Q[1, 2]:
            raise InconsistencyError(
                f"tree overlap {length} != -log|q_12| = {-Q[1, 2]}")
        return MetricSkeleton(SkeletonKind.SHARED_EDGE, L1, L2, -Q[1, 2])
    gap, _, _ = bk.segment_gap(*paths)
    if gap > 0:
        return MetricSkeleton(SkeletonKind.CONNECTING_EDGE, L1, L2, gap)
    ov = bk.overlap(*paths)
    if ov and ov[0] > 0:
        raise InconsistencyError(f"cycles overlap by {ov[0]} but log|q_12| = 0")
    return MetricSkeleton(SkeletonKind.CONNECTING_POINT, L1, L2, Fraction(0))


# -- mu --------------------------------------------------------------------

def mu_lift(skel: MetricSkeleton, p: SkeletonPoint) -> Vec:
    """The piecewise-linear lift of mu to R^2 before reduction."""
    if p.locus == "cycle":
        e = vec(1, 0) if p.index == 1 else vec(0, 1)
        return vadd(skel.v, vscale(p.coord, e))
    if p.locus == "shared":
        return vec(p.coord, p.coord)
    return vec(0, 0)


def mu(skel: MetricSkeleton, p: SkeletonPoint) -> TorusPoint:
    return skel.lattice.reduce(mu_lift(skel, p))


def check_mu_cycle_isometry(skel: MetricSkeleton, step=Fraction(1, 16)) -> VerificationReport:
    """Compare torus distance of mu-images with arc distance for all grid
    pairs on each cycle; failures carry the offending arcs."""
    step = Fraction(step)
    rep = VerificationReport()
    lat = skel.lattice
    for i in (1, 2):
        L = skel.L(i)
        n = L / step
        if n.denominator != 1:
            raise ValueError("grid step must divide the cycle lengths")
        arcs = [k * step for k in range(int(n))]
        images = [mu_lift(skel, skel.cycle_point(i, a)) for a in arcs]
        bad = []
        for x in range(len(arcs)):
            for y in range(x + 1, len(arcs)):
                d = arcs[y] - arcs[x]
                want = min(d, L - d)
                got = lat.torus_distance(images[x], images[y])
                if got != want:
                    bad.append((arcs[x], arcs[y], got, want))
        detail = (f"{len(arcs) * (len(arcs) - 1) // 2} pairs" if not bad else
                  "arcs {} and {}: image distance {} vs arc distance {}".format(*bad[0]))
        rep.add(f"cycle {i} isometry", not bad, detail)
    return rep


# -- two-summand decomposition -----------------------------------------------

def two_summand_decomposition(lattice: TropLattice, skel: MetricSkeleton,
                              x) -> tuple[SkeletonPoint, SkeletonPoint]:
    """The unique ``(S, T)`` with ``mu(S) + mu(T) = x``, ``mu(S) = v + a e1``
    and ``mu(T) = v + b e2``, ``0 < a < L1 - ell`` and ``0 < b < L2 - ell``."""
    x = x.rep if isinstance(x, TorusPoint) else vec(*x)
    target = vsub(x, vscale(2, skel.v))
    s, u = lattice.coords(target)
    hits = []
    s0, u0 = math.floor(s), math.floor(u)
    for m, n in product(range(s0 - 3, s0 + 4), range(u0 - 3, u0 + 4)):
        a, b = lattice.combine(s - m, u - n)
        if 0 < a < skel.private_length(1) and 0 < b < skel.private_length(2):
            hits.append((a, b))
    if len(hits) != 1:
        raise ValueError(f"{x} is outside the decomposition hypotheses "
                         f"({len(hits)} candidate decompositions)")
    a, b = hits[0]
    return skel.cycle_point(1, a), skel.cycle_point(2, b)
