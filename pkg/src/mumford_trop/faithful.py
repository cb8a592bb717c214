"""Coordinate functions on the marked skeleton and their tropicalization.

A rational function is recorded tropically by its divisor.  Its slopes on
the skeleton solve a Laplace system: at each vertex the outgoing slopes add
up to the multiplicity there, and the function closes up around each cycle.
Integrality of the solution is the tropical shadow of the divisor being
principal.  Rays leave each zero or pole in the direction minus its
multiplicity vector.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .geometry import Piece, intersect
from .linalg import solve_exact
from .moebius import PeriodMatrix, SchottkyRank2, log_q, normalize, verify_good_domain
from .skeleton import (
    MetricSkeleton,
    SkeletonKind,
    SkeletonPoint,
    TropLattice,
    build_skeleton,
    mu_lift,
    two_summand_decomposition,
    vadd,
    vscale,
)

LABELS = ("P1", "P2", "P3", "P4", "S1", "S2", "S3", "T1", "T2", "T3")

GREEK = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
         "iota", "kappa", "mu", "nu", "xi", "omicron", "pi", "rho", "sigma",
         "tau", "upsilon", "phi", "psi", "omega")

G_DIVISOR_NOTE = ("g is built with poles P1, P3, P4; poles P2, P3, P4 would "
                  "not give a principal divisor")


class UnsupportedError(ValueError):
    pass


class NonIntegralError(ValueError):
    pass


def check_assumption(Q: PeriodMatrix) -> bool:
    off = abs(Q[1, 2])
    return -Q[1, 1] > 2 * off and -Q[2, 2] > 2 * off


# -- marked skeleton ---------------------------------------------------------

@dataclass(frozen=True)
class MarkedSkeleton:
    skel: MetricSkeleton
    marks: tuple[tuple[str, SkeletonPoint], ...]
    join_edges: tuple[tuple[frozenset, Fraction], ...] = ()

    def position(self, label: str) -> SkeletonPoint:
        for name, p in self.marks:
            if name == label:
                return p
        raise KeyError(label)

    def labels_at(self, p: SkeletonPoint) -> tuple[str, ...]:
        return tuple(name for name, q in self.marks if q == p)

    @property
    def coincidences(self) -> list[tuple[str, ...]]:
        seen = {}
        for name, p in self.marks:
            seen.setdefault(p, []).append(name)
        return [tuple(v) for v in seen.values() if len(v) > 1]

    def join_length(self, labels: Iterable[str]) -> Fraction:
        key = frozenset(labels)
        for k, eps in self.join_edges:
            if k == key:
                return eps
        return Fraction(0)

    @property
    def A(self) -> Fraction:
        return self.skel.L1 - 2 * self._ell

    @property
    def B(self) -> Fraction:
        return self.skel.L2 - 2 * self._ell

    @property
    def _ell(self) -> Fraction:
        return self.skel.ell if self.skel.shared else Fraction(0)


def _join_config(join_edges) -> tuple[tuple[frozenset, Fraction], ...]:
    if not join_edges:
        return ()
    items = join_edges.items() if isinstance(join_edges, Mapping) else join_edges
    out = []
    for labels, eps in items:
        if isinstance(labels, str):
            labels = labels.replace("/", ",").split(",")
        eps = Fraction(eps)
        if eps < 0:
            raise ValueError("join-edge length must be >= 0")
        out.append((frozenset(l.strip() for l in labels), eps))
    return tuple(sorted(out, key=lambda kv: sorted(kv[0])))


def place_marked_points(skel: MetricSkeleton, join_edges=None) -> MarkedSkeleton:
    """Positions of P1..P4, S1..S3, T1..T3 on the two cycles."""
    ell = skel.ell if skel.shared else Fraction(0)
    if not (skel.L1 > 2 * ell and skel.L2 > 2 * ell):
        raise UnsupportedError("unsupported: shared edge longer than half cycle")
    A, B = skel.L1 - 2 * ell, skel.L2 - 2 * ell
    arcs = {
        "P1": (1, A / 4), "P2": (1, A / 2), "T2": (1, skel.L1 / 2),
        "T1": (1, 3 * A / 4 + ell), "S3": (1, 3 * A / 4 + ell),
        "P3": (2, B / 4), "P4": (2, B / 2), "S2": (2, skel.L2 / 2),
        "S1": (2, 3 * B / 4 + ell), "T3": (2, 3 * B / 4 + ell),
    }
    marks = tuple((label, skel.cycle_point(*arcs[label])) for label in LABELS)
    return MarkedSkeleton(skel, marks, _join_config(join_edges))


# -- divisors ----------------------------------------------------------------

@dataclass(frozen=True)
class Divisor:
    """Labeled points with integer multiplicities; several labels may sit
    at the same skeleton point."""

    entries: tuple[tuple[str, SkeletonPoint, int], ...]

    @classmethod
    def from_labels(cls, msk: MarkedSkeleton, mults: Mapping[str, int],
                    extra: Mapping[str, SkeletonPoint] | None = None) -> Divisor:
        extra = extra or {}
        entries = []
        for label, m in mults.items():
            p = extra[label] if label in extra else msk.position(label)
            entries.append((label, p, int(m)))
        return cls(tuple(entries))

    @classmethod
    def from_points(cls, mults: Mapping[SkeletonPoint, int]) -> Divisor:
        return cls(tuple((f"x{k}", p, int(m))
                         for k, (p, m) in enumerate(sorted(mults.items())) if m))

    @property
    def degree(self) -> int:
        return sum(m for _, _, m in self.entries)

    def by_point(self) -> dict[SkeletonPoint, int]:
        out = defaultdict(int)
        for _, p, m in self.entries:
            out[p] += m
        return dict(out)

    @property
    def support(self) -> set[SkeletonPoint]:
        return {p for p, m in self.by_point().items() if m}

    def mult(self, label: str) -> int:
        return sum(m for l, _, m in self.entries if l == label)

    def __str__(self):
        parts = []
        for label, _, m in self.entries:
            sign = "-" if m < 0 else "+"
            k = "" if abs(m) == 1 else str(abs(m))
            parts.append(f"{sign} {k}{label}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else s


def divisor_is_tropically_principal(msk: MarkedSkeleton, div: Divisor,
                                    lattice: TropLattice | None = None) -> bool:
    """Whether the mu-weighted sum of the divisor lies in the lattice."""
    if div.degree != 0:
        raise ValueError(f"divisor has degree {div.degree}, expected 0")
    lattice = lattice or msk.skel.lattice
    total = (Fraction(0), Fraction(0))
    for _, p, m in div.entries:
        total = vadd(total, vscale(m, mu_lift(msk.skel, p)))
    return lattice.contains(total)


# -- subdivided graph and slope fields ----------------------------------------

@dataclass(frozen=True)
class Edge:
    name: str
    tail: SkeletonPoint
    head: SkeletonPoint
    length: Fraction


@dataclass(frozen=True)
class SkeletonGraph:
    skel: MetricSkeleton
    vertices: tuple[SkeletonPoint, ...]
    edges: tuple[Edge, ...]
    cycles: tuple[tuple[int, ...], ...]  # edge indices, traversed forwards

    def vertex_names(self) -> dict[SkeletonPoint, str]:
        sk = self.skel
        if sk.shared:
            names = {sk.shared_point(sk.ell): "X0", sk.shared_point(0): "X1"}
        elif sk.ell == 0:
            names = {sk.cycle_point(1, 0): "v0"}
        else:
            names = {sk.cycle_point(1, 0): "v0_1", sk.cycle_point(2, 0): "v0_2"}
        return names


def _names(prefix: Sequence[str] | str, n: int) -> list[str]:
    if isinstance(prefix, str):
        return [prefix] if n == 1 else [f"{prefix}{k + 1}" for k in range(n)]
    if n <= len(prefix):
        return list(prefix[:n])
    return [f"{prefix[0]}{k + 1}" for k in range(n)]


def skeleton_graph(skel: MetricSkeleton, points: Iterable[SkeletonPoint]) -> SkeletonGraph:
    """Subdivide the skeleton at ``points``."""
    points = set(points)
    edges: list[Edge] = []
    cycles: list[list[int]] = [[], []]

    def chain(stops, coords, names_from, cycle_ids):
        names = _names(names_from, len(stops) - 1)
        for k in range(len(stops) - 1):
            for c in cycle_ids:
                cycles[c - 1].append(len(edges))
            edges.append(Edge(names[k], stops[k], stops[k + 1],
                              coords[k + 1] - coords[k]))

    latin = tuple("abcdefghijklmnopqrstuvwxyz")
    if skel.shared:
        X0, X1 = skel.shared_point(skel.ell), skel.shared_point(0)
        for i, base in ((1, latin), (2, GREEK)):
            inner = sorted(p.coord for p in points
                           if p.locus == "cycle" and p.index == i)
            coords = [Fraction(0)] + inner + [skel.private_length(i)]
            stops = [X0] + [skel.cycle_point(i, a) for a in inner] + [X1]
            chain(stops, coords, base, (i,))
        inner = sorted(p.coord for p in points
                       if p.locus == "shared" and 0 < p.coord < skel.ell)
        coords = [Fraction(0)] + inner + [skel.ell]
        stops = [X1] + [skel.shared_point(s) for s in inner] + [X0]
        chain(stops, coords, "lambda", (1, 2))
        verts = {X0, X1}
    else:
        verts = set()
        for i, base in ((1, latin), (2, GREEK)):
            v0 = skel.cycle_point(i, 0)
            inner = sorted(p.coord for p in points
                           if p.locus == "cycle" and p.index == i and p.coord > 0)
            coords = [Fraction(0)] + inner + [skel.L(i)]
            stops = [v0] + [skel.cycle_point(i, a) for a in inner] + [v0]
            chain(stops, coords, base, (i,))
            verts.add(v0)
        if skel.ell > 0:
            inner = sorted(p.coord for p in points if p.locus == "bridge")
            coords = [Fraction(0)] + inner + [skel.ell]
            stops = ([skel.bridge_point(0)] + [skel.bridge_point(s) for s in inner]
                     + [skel.bridge_point(skel.ell)])
            chain(stops, coords, "chi", ())
    for e in edges:
        verts.update((e.tail, e.head))
    return SkeletonGraph(skel, tuple(sorted(verts)), tuple(edges),
                         tuple(tuple(c) for c in cycles))


@dataclass(frozen=True)
class SlopeSolution:
    """Slope of one function along every edge, in the edge's direction."""

    graph: SkeletonGraph
    divisor: Divisor
    slopes: tuple[Fraction, ...]

    @property
    def integral(self) -> bool:
        return all(m.denominator == 1 for m in self.slopes)

    def slope(self, name: str) -> Fraction:
        for e, m in zip(self.graph.edges, self.slopes):
            if e.name == name:
                return m
        raise KeyError(name)

    def as_dict(self) -> dict[str, Fraction]:
        return {e.name: m for e, m in zip(self.graph.edges, self.slopes)}

    def outgoing(self, v: SkeletonPoint) -> Fraction:
        total = Fraction(0)
        for e, m in zip(self.graph.edges, self.slopes):
            if e.tail == v:
                total += m
            if e.head == v:
                total -= m
        return total

    def cycle_sum(self, c: int) -> Fraction:
        edges = self.graph.edges
        return sum((self.slopes[k] * edges[k].length for k in self.graph.cycles[c]),
                   Fraction(0))

    def values(self) -> dict[SkeletonPoint, Fraction]:
        """Integrate from the base vertex, where the value is 0."""
        base = self.graph.skel.base_vertex
        val = {base: Fraction(0)}
        pending = list(zip(self.graph.edges, self.slopes))
        while pending:
            rest = []
            for e, m in pending:
                if e.tail in val:
                    val.setdefault(e.head, val[e.tail] + m * e.length)
                elif e.head in val:
                    val[e.tail] = val[e.head] - m * e.length
                else:
                    rest.append((e, m))
            if len(rest) == len(pending):
                raise RuntimeError("skeleton graph is disconnected")
            pending = rest
        return val


def solve_slope_field(msk: MarkedSkeleton, div: Divisor,
                      extra_points: Iterable[SkeletonPoint] = ()) -> SlopeSolution:
    """Unique slopes with outgoing sum = multiplicity at every vertex and
    zero integral around both cycles."""
    if div.degree != 0:
        raise ValueError(f"divisor has degree {div.degree}, expected 0")
    pts = {p for _, p in msk.marks} | div.support | set(extra_points)
    graph = skeleton_graph(msk.skel, pts)
    mult = div.by_point()
    n = len(graph.edges)
    rows, rhs = [], []
    for v in graph.vertices:
        row = [0] * n
        for k, e in enumerate(graph.edges):
            if e.tail == v:
                row[k] += 1
            if e.head == v:
                row[k] -= 1
        rows.append(row)
        rhs.append(mult.get(v, 0))
    for c in graph.cycles:
        row = [Fraction(0)] * n
        for k in c:
            row[k] += graph.edges[k].length
        rows.append(row)
        rhs.append(0)
    return SlopeSolution(graph, div, tuple(solve_exact(rows, rhs)))


def build_coordinate_functions(msk: MarkedSkeleton) -> tuple[Divisor, Divisor, Divisor]:
    """Divisors of f, g and h; h gets two extra zeros U, V from the
    two-summand decomposition."""
    sk = msk.skel
    div_f = Divisor.from_labels(msk, {"S1": 1, "S2": 1, "S3": 1,
                                      "P1": -1, "P2": -1, "P3": -1})
    div_g = Divisor.from_labels(msk, {"T1": 1, "T2": 1, "T3": 1,
                                      "P1": -1, "P3": -1, "P4": -1})
    target = (Fraction(0), Fraction(0))
    for label, m in (("S3", 1), ("P1", 1), ("P3", 1), ("T2", -1)):
        target = vadd(target, vscale(m, mu_lift(sk, msk.position(label))))
    U, V = two_summand_decomposition(sk.lattice, sk, sk.lattice.reduce(target))
    div_h = Divisor.from_labels(
        msk, {"T2": 1, "U": 1, "V": 1, "S3": -1, "P1": -1, "P3": -1},
        extra={"U": U, "V": V})
    for name, d in (("f", div_f), ("g", div_g), ("h", div_h)):
        if not divisor_is_tropically_principal(msk, d):
            raise ArithmeticError(f"div({name}) is not tropically principal")
    return div_f, div_g, div_h


# -- tropical curves ---------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    name: str
    tail: str
    head: str
    slope: tuple[int, ...]
    length: Fraction
    kind: str = "skeleton"


@dataclass(frozen=True)
class Ray:
    label: str
    base: str
    direction: tuple[int, ...]


@dataclass
class TropicalCurve:
    dim: int
    vertices: dict[str, tuple[Fraction, ...]]
    segments: list[Segment]
    rays: list[Ray]

    def unbalanced(self) -> list[tuple[str, tuple]]:
        """Vertices where outgoing slope vectors (rays included) don't sum
        to zero."""
        total = {v: [0] * self.dim for v in self.vertices}
        for s in self.segments:
            for k in range(self.dim):
                total[s.tail][k] += s.slope[k]
                total[s.head][k] -= s.slope[k]
        for r in self.rays:
            for k in range(self.dim):
                total[r.base][k] += r.direction[k]
        return [(v, tuple(t)) for v, t in total.items() if any(t)]

    @property
    def balanced(self) -> bool:
        return not self.unbalanced()

    def piece(self, name: str) -> Piece:
        for s in self.segments:
            if s.name == name:
                return Piece(self.vertices[s.tail], s.slope, s.length)
        for r in self.rays:
            if ray_name(r) == name:
                return Piece(self.vertices[r.base], r.direction, None)
        raise KeyError(name)


def ray_name(r: Ray) -> str:
    return f"ray {r.label}"


def _vertex_labels(graph: SkeletonGraph, divisors: Sequence[Divisor],
                   msk: MarkedSkeleton) -> dict[SkeletonPoint, str]:
    at = defaultdict(list)
    for label, p in msk.marks:
        at[p].append(label)
    for d in divisors:
        for label, p, _ in d.entries:
            if label not in at[p]:
                at[p].append(label)
    named = graph.vertex_names()
    out = {}
    for v in graph.vertices:
        if v in named:
            out[v] = named[v]
        elif at.get(v):
            out[v] = "/".join(at[v])
        else:
            out[v] = str(v)
    return out


def build_tropical_curve(msk: MarkedSkeleton, solutions: Sequence[SlopeSolution],
                         join_edges=None) -> TropicalCurve:
    """Embed the extended skeleton using one slope field per coordinate."""
    if not 2 <= len(solutions) <= 3:
        raise ValueError("need two or three coordinate functions")
    graph = solutions[0].graph
    for sol in solutions:
        if sol.graph != graph:
            raise ValueError("slope fields live on different subdivisions")
        if not sol.integral:
            raise NonIntegralError("slope field is not integral")
    joins = msk.join_edges if join_edges is None else _join_config(join_edges)
    dim = len(solutions)
    names = _vertex_labels(graph, [s.divisor for s in solutions], msk)
    values = [s.values() for s in solutions]
    vertices = {names[v]: tuple(val[v] for val in values) for v in graph.vertices}
    segments = []
    for k, e in enumerate(graph.edges):
        slope = tuple(int(s.slopes[k]) for s in solutions)
        segments.append(Segment(e.name, names[e.tail], names[e.head], slope, e.length))

    # rays, grouped by base point
    groups: dict[SkeletonPoint, list[tuple[str, tuple[int, ...]]]] = defaultdict(list)
    labels = []
    for s in solutions:
        for label, p, _ in s.divisor.entries:
            if (label, p) not in labels:
                labels.append((label, p))
    for label, p in labels:
        direction = tuple(-s.divisor.mult(label) for s in solutions)
        if any(direction):
            groups[p].append((label, direction))
    rays = []
    for p in graph.vertices:
        group = groups.get(p, [])
        base = names[p]
        eps = Fraction(0)
        for key, length in joins:
            if len(group) > 1 and key == frozenset(l for l, _ in group):
                eps = length
        if eps > 0:
            total = tuple(sum(d[k] for _, d in group) for k in range(dim))
            if not any(total):
                raise ValueError(f"join edge at {base} has zero slope")
            jname = "join(" + ",".join(l for l, _ in group) + ")"
            vertices[jname] = tuple(x + eps * t for x, t in zip(vertices[base], total))
            segments.append(Segment(jname, base, jname, total, eps, "join"))
            base = jname
        rays.extend(Ray(label, base, d) for label, d in group)
    return TropicalCurve(dim, vertices, segments, rays)


# -- faithfulness --------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    first: str
    second: str
    kind: str  # "point" or "interval"
    witness: tuple[Fraction, ...]


@dataclass
class FaithfulnessReport:
    dim: int
    expansion: dict[str, int]
    skeleton_crossings: list[Crossing]
    crossings: list[Crossing]
    ray_primitive: dict[str, bool]
    unbalanced: list = field(default_factory=list)

    @property
    def skeleton_faithful(self) -> bool:
        return all(f == 1 for f in self.expansion.values()) and not self.skeleton_crossings

    @property
    def extended_faithful(self) -> bool:
        return (self.skeleton_faithful and not self.crossings
                and all(self.ray_primitive.values()))

    @property
    def verdict(self) -> str:
        if self.extended_faithful:
            return "faithful on extended skeleton"
        if self.skeleton_faithful:
            n = len(self.crossings)
            return f"faithful on skeleton, {n} ray crossing{'s' if n != 1 else ''}"
        return "not faithful"


def _gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    return g


def check_faithful(tc: TropicalCurve, msk: MarkedSkeleton | None = None) -> FaithfulnessReport:
    """Expansion factors, pairwise intersections of all image pieces and
    primitivity of rays.  Pieces may touch only at the image of a vertex
    they share."""
    pieces = []  # (name, piece, vertex names, is_skeleton)
    for s in tc.segments:
        pieces.append((s.name, Piece(tc.vertices[s.tail], s.slope, s.length),
                       {s.tail, s.head}, s.kind == "skeleton"))
    for r in tc.rays:
        pieces.append((ray_name(r), Piece(tc.vertices[r.base], r.direction, None),
                       {r.base}, False))
    expansion = {s.name: _gcd(s.slope) for s in tc.segments if s.kind == "skeleton"}
    skel_x, all_x = [], []
    for a in range(len(pieces)):
        na, pa, va, ska = pieces[a]
        for b in range(a + 1, len(pieces)):
            nb, pb, vb, skb = pieces[b]
            hit = intersect(pa, pb)
            if hit is None:
                continue
            if hit[0] == "point" and any(tc.vertices[v] == hit[1] for v in va & vb):
                continue
            c = Crossing(na, nb, hit[0], hit[1])
            all_x.append(c)
            if ska and skb:
                skel_x.append(c)
    prim = {r.label: _gcd(r.direction) == 1 for r in tc.rays}
    return FaithfulnessReport(tc.dim, expansion, skel_x, all_x, prim, tc.unbalanced())


def lift_values(tc3: TropicalCurve, crossing: Crossing) -> tuple[Fraction, Fraction]:
    """Third coordinates of the two pieces of a planar crossing above its
    witness point."""
    out = []
    for name in (crossing.first, crossing.second):
        p = tc3.piece(name)
        d = p.direction
        k = 0 if d[0] != 0 else 1
        t = (crossing.witness[k] - p.base[k]) / d[k]
        out.append(p.at(t)[2])
    return out[0], out[1]


# -- pipeline ----------------------------------------------------------------

@dataclass
class Tropicalization:
    schottky: SchottkyRank2
    period_matrix: PeriodMatrix
    skeleton: MetricSkeleton
    marked: MarkedSkeleton
    divisors: dict[str, Divisor]
    solutions: dict[str, SlopeSolution]
    curve2: TropicalCurve
    curve3: TropicalCurve
    report2: FaithfulnessReport
    report3: FaithfulnessReport
    warnings: list[str]

    def __iter__(self):
        return iter((self.curve2, self.curve3, self.report2, self.report3))


def tropicalize(S: SchottkyRank2, join_edges=None) -> Tropicalization:
    """Normalize, classify, place the marked points, solve for f, g, h and
    check both embeddings."""
    check = verify_good_domain(S)
    if not check.ok:
        name, _, detail = check.failures()[0]
        raise ValueError(f"not a good fundamental domain: {name} {detail}".strip())
    S = normalize(S)
    Q = log_q(S)
    if not check_assumption(Q):
        raise UnsupportedError("unsupported: shared edge longer than half cycle")
    skel = build_skeleton(S, Q)
    msk = place_marked_points(skel, join_edges)
    divs = dict(zip("fgh", build_coordinate_functions(msk)))
    extra = set().union(*(d.support for d in divs.values()))
    sols = {k: solve_slope_field(msk, d, extra) for k, d in divs.items()}
    c2 = build_tropical_curve(msk, [sols["f"], sols["g"]])
    c3 = build_tropical_curve(msk, [sols["f"], sols["g"], sols["h"]])
    warnings = [G_DIVISOR_NOTE]
    if skel.kind is SkeletonKind.CONNECTING_POINT:
        warnings.append("cycles meet in a point; treated as a bridge of length 0")
    return Tropicalization(S, Q, skel, msk, divs, sols, c2, c3,
                           check_faithful(c2, msk), check_faithful(c3, msk), warnings)
