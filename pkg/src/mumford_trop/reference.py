"""Reference Schottky data used throughout the tests and the CLI samples.

Each instance is built from repelling/attracting centers and multipliers with
:func:`hyperbolic_generator`; the disc radii satisfy
``log r+ + log r- = log|k| + 2 log|b - c|``.
"""

from __future__ import annotations

from .moebius import Disc, SchottkyRank2, hyperbolic_generator
from .valued_field import parse_puiseux as P


def build(b1, c1, k1, r1p, r1m, b2, c2, k2, r2p, r2m) -> SchottkyRank2:
    b1, c1, k1, b2, c2, k2 = (P(x) for x in (b1, c1, k1, b2, c2, k2))
    return SchottkyRank2(
        hyperbolic_generator(b1, c1, k1),
        hyperbolic_generator(b2, c2, k2),
        Disc(b1, r1p), Disc(c1, r1m), Disc(b2, r2p), Disc(c2, r2m),
    )


def se1() -> SchottkyRank2:
    """Cycles sharing an edge: L1 = 4, L2 = 6, shared length 1."""
    return build("t^4", "t^2", "t^4", -5, -3, "t^3", "1", "t^6", -5, -1)


def ce1() -> SchottkyRank2:
    """Cycles joined by a bridge: L1 = 3, L2 = 4, bridge length 2."""
    return build("t^4", "t^3", "t^3", -5, -4, "t", "1", "t^4", -2, -2)


def cp1() -> SchottkyRank2:
    """Cycles meeting in a point: |c1| = |b2| = |c1 - b2|."""
    return build("t^4", "-t", "t^6", -5, -3, "t", "1", "t^4", -2, -2)


INSTANCES = {"SE-1": se1, "CE-1": ce1, "CP-1": cp1}
