"""Independent cross-checks: truncated products against closed forms, grid
searches, and randomly generated principal divisors."""

from __future__ import annotations

import random
from fractions import Fraction

from . import berkovich as bk
from .faithful import Divisor, SlopeSolution, skeleton_graph
from .moebius import (
    DISC_LABELS,
    DomainError,
    MoebiusMap,
    PeriodMatrix,
    PoleInDiscError,
    SchottkyRank2,
    VerificationReport,
    _outside_open_discs,
    u_log_abs,
    u_log_abs_truncated,
    verify_good_domain,
)
from .skeleton import MetricSkeleton, SkeletonPoint, mu_lift, vadd
from .valued_field import PuiseuxNumber


def basepoint(S: SchottkyRank2) -> PuiseuxNumber:
    """A point of absolute value larger than every disc."""
    top = Fraction(0)
    for D in S.discs().values():
        top = max(top, D.log_radius)
        if D.center.terms:
            top = max(top, -D.center.valuation)
    return PuiseuxNumber.monomial(-(int(top) + 1))


def domain_samples(S: SchottkyRank2, n: int = 12) -> list[PuiseuxNumber]:
    """Points of the closed fundamental domain: disc boundaries first, then
    monomials."""
    a = basepoint(S)
    cands = []
    for label in DISC_LABELS:
        D = S.disc(label)
        for c in (1, -1, 2):
            cands.append(D.center + PuiseuxNumber.monomial(-D.log_radius, c))
    for k in range(-2, 12):
        for c in (1, 3):
            cands.append(PuiseuxNumber.monomial(Fraction(k, 2), c))
    out = []
    for z in cands:
        if len(out) >= n:
            break
        if z == a or any(z == w for w in out):
            continue
        if _outside_open_discs(S, z):
            out.append(z)
    return out


def u_truncation_agreement(S: SchottkyRank2, L: int, points=None) -> VerificationReport:
    """Compare the truncated product with the closed form at each point."""
    rep = VerificationReport()
    points = points if points is not None else domain_samples(S)
    a = basepoint(S)
    for i in (1, 2):
        bad = []
        for z in points:
            want = u_log_abs(S, i, z)
            got = u_log_abs_truncated(S, i, z, a, L)
            if got != want:
                bad.append(f"z = {z}: truncated {got} vs closed form {want}")
        rep.add(f"u_{i} truncation L={L}", not bad,
                bad[0] if bad else f"{len(points)} points")
    return rep


def period_tree_consistency(S: SchottkyRank2, Q: PeriodMatrix) -> VerificationReport:
    rep = VerificationReport()
    paths = []
    for i in (1, 2):
        x = bk.zeta(S.b(i), S.r_plus(i))
        y = bk.zeta(S.c(i), S.r_minus(i))
        d = bk.path_distance(x, y)
        paths.append(bk.path(x, y))
        rep.add(f"cycle {i} length", d == -Q[i, i],
                f"rho({x}, {y}) = {d}, -log|q_{i}{i}| = {-Q[i, i]}")
    if Q[1, 2] < 0:
        ov = bk.overlap(*paths)
        length = ov[0] if ov else Fraction(0)
        rep.add("shared edge length", length == -Q[1, 2],
                f"tree overlap {length}, -log|q_12| = {-Q[1, 2]}")
    return rep


def twoadd_grid_search(skel: MetricSkeleton, target, step=Fraction(1, 16)):
    """All unordered pairs of grid points whose mu-images add up to
    ``target`` modulo the lattice."""
    lat = skel.lattice
    goal = lat.reduce(target)
    pts = skel.grid(step)
    lifts = [mu_lift(skel, p) for p in pts]
    # index grid points by their reduced image to make the search linear
    by_image: dict = {}
    for p, x in zip(pts, lifts):
        by_image.setdefault(lat.reduce(x), []).append(p)
    hits = set()
    for p, x in zip(pts, lifts):
        need = lat.reduce((goal.rep[0] - x[0], goal.rep[1] - x[1]))
        for q in by_image.get(need, ()):
            hits.add(tuple(sorted((p, q))))
    return sorted(hits)


def slope_field_laws(sol: SlopeSolution) -> VerificationReport:
    """Outgoing slopes equal the multiplicity at every vertex (so with the
    ray of slope minus the multiplicity the total is zero) and each cycle
    closes up."""
    rep = VerificationReport()
    mult = sol.divisor.by_point()
    bad = [(v, sol.outgoing(v), mult.get(v, 0)) for v in sol.graph.vertices
           if sol.outgoing(v) != mult.get(v, 0)]
    rep.add("harmonicity", not bad,
            "" if not bad else f"at {bad[0][0]}: outgoing {bad[0][1]} vs multiplicity {bad[0][2]}")
    for c in range(2):
        s = sol.cycle_sum(c)
        rep.add(f"cycle {c + 1} closure", s == 0, f"sum {s}")
    return rep


def random_principal_divisor(skel: MetricSkeleton, step, rng: random.Random,
                             nonzero: int = 4) -> Divisor:
    """Divisor of a random piecewise-linear function with integer slopes.

    The skeleton is cut into edges of length ``step``; a few edges get slope
    +-1, then one private edge per cycle is adjusted so both cycles close.
    """
    step = Fraction(step)
    graph = skeleton_graph(skel, skel.grid(step))
    n = len(graph.edges)
    slopes = [0] * n
    for k in rng.sample(range(n), min(nonzero, n)):
        slopes[k] = rng.choice((-1, 1))
    for c in range(2):
        private = [k for k in graph.cycles[c] if k not in graph.cycles[1 - c]]
        k = rng.choice(private)
        # all edges have length step, so closure is an integer condition
        rest = sum(slopes[j] * graph.edges[j].length for j in graph.cycles[c] if j != k)
        slopes[k] = -rest / graph.edges[k].length
    mult: dict[SkeletonPoint, int] = {}
    for e, m in zip(graph.edges, slopes):
        mult[e.tail] = mult.get(e.tail, 0) + int(m)
        mult[e.head] = mult.get(e.head, 0) - int(m)
    return Divisor.from_points(mult)


def random_divisor(skel: MetricSkeleton, step, rng: random.Random, size: int = 3) -> Divisor:
    """Random degree-0 divisor with ``size`` zeros and poles on grid points."""
    pts = skel.grid(step)
    size = min(size, len(pts))
    mult: dict[SkeletonPoint, int] = {}
    for p in rng.sample(pts, size):
        mult[p] = mult.get(p, 0) + 1
    for p in rng.sample(pts, size):
        mult[p] = mult.get(p, 0) - 1
    return Divisor.from_points(mult)


def mu_sum(skel: MetricSkeleton, div: Divisor):
    total = (Fraction(0), Fraction(0))
    for _, p, m in div.entries:
        x = mu_lift(skel, p)
        total = vadd(total, (m * x[0], m * x[1]))
    return total



def random_admissible_conjugate(S: SchottkyRank2, rng: random.Random,
                                tries: int = 200) -> tuple[MoebiusMap, SchottkyRank2]:
    """Conjugate by ``z -> (z - p)/(z - q)`` for random ``p``, ``q``, keeping
    the first map whose image is again a good fundamental domain."""
    def pick():
        e = Fraction(rng.randint(-6, 8), rng.choice((1, 2)))
        x = PuiseuxNumber.monomial(e, rng.choice((1, -1, 2, -3)))
        if rng.random() < 0.5:
            x = x + PuiseuxNumber.monomial(e + rng.randint(1, 3), rng.choice((1, -1)))
        return x

    for _ in range(tries):
        p, q = pick(), pick()
        if (p - q).is_zero():
            continue
        g = MoebiusMap(PuiseuxNumber.const(1), -p, PuiseuxNumber.const(1), -q)
        try:
            T = S.conjugate(g)
        except (PoleInDiscError, DomainError):
            continue
        if verify_good_domain(T).ok:
            return g, T
    raise RuntimeError(f"no admissible conjugation found in {tries} tries")
