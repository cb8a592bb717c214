"""Exact intersection of segments and rays in Q^d."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class Piece:
    """Points ``base + t * direction`` for ``0 <= t <= tmax``; a ray has
    ``tmax = None``."""

    base: Point
    direction: tuple
    tmax: Fraction | None

    def at(self, t) -> Point:
        return tuple(b + t * d for b, d in zip(self.base, self.direction))

    @property
    def end(self) -> Point | None:
        return None if self.tmax is None else self.at(self.tmax)

    @property
    def is_point(self) -> bool:
        return self.tmax == 0 or not any(self.direction)


def _dot(x, y) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def _sub(x, y) -> Point:
    return tuple(a - b for a, b in zip(x, y))


def parallel(x, y) -> bool:
    return all(x[i] * y[j] == x[j] * y[i] for i, j in combinations(range(len(x)), 2))


def _clip(lo, hi, tmax):
    # intersect [lo, hi] (hi may be None = +inf) with [0, tmax]
    lo = max(lo, Fraction(0))
    if tmax is not None:
        hi = tmax if hi is None else min(hi, tmax)
    if hi is not None and lo > hi:
        return None
    return lo, hi


def _param_on(P: Piece, x: Point) -> Fraction | None:
    """``t`` with ``P.at(t) == x`` inside the piece, else None."""
    if P.is_point:
        return Fraction(0) if tuple(P.base) == tuple(x) else None
    rel = _sub(x, P.base)
    if not parallel(rel, P.direction):
        return None
    t = _dot(rel, P.direction) / _dot(P.direction, P.direction)
    if t < 0 or (P.tmax is not None and t > P.tmax):
        return None
    return t


def intersect(P: Piece, Q: Piece):
    """``None``, ``("point", x)`` or ``("interval", x0, x1)`` where ``x1`` is
    None for an unbounded overlap."""
    if P.is_point:
        return ("point", P.base) if _param_on(Q, P.base) is not None else None
    if Q.is_point:
        return ("point", Q.base) if _param_on(P, Q.base) is not None else None
    d1, d2 = P.direction, Q.direction
    rel = _sub(Q.base, P.base)
    if parallel(d1, d2):
        if not parallel(rel, d1):
            return None
        n = _dot(d1, d1)
        ta = _dot(rel, d1) / n
        k = _dot(d2, d1) / n
        if Q.tmax is None:
            lo, hi = (ta, None) if k > 0 else (None, ta)
        else:
            tb = ta + k * Q.tmax
            lo, hi = min(ta, tb), max(ta, tb)
        if lo is None:
            if hi < 0:
                return None
            lo = Fraction(0)
        span = _clip(lo, hi, P.tmax)
        if span is None:
            return None
        lo, hi = span
        if hi == lo:
            return "point", P.at(lo)
        return "interval", P.at(lo), None if hi is None else P.at(hi)
    # t d1 - s d2 = rel on a pair of coordinates with nonzero determinant
    for i, j in combinations(range(len(d1)), 2):
        det = -d1[i] * d2[j] + d2[i] * d1[j]
        if det != 0:
            t = (-rel[i] * d2[j] + d2[i] * rel[j]) / det
            s = (d1[i] * rel[j] - rel[i] * d1[j]) / det
            break
    x = P.at(t)
    if x != Q.at(s):
        return None
    if t < 0 or s < 0:
        return None
    if (P.tmax is not None and t > P.tmax) or (Q.tmax is not None and s > Q.tmax):
        return None
    return "point", x
