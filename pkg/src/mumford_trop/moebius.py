"""Moebius maps over K, disc images, and rank-two Schottky data."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Union

from .valued_field import (
    ONE,
    ZERO,
    PrecisionError,
    PuiseuxNumber,
    get_precision,
    log_abs,
)


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__


INF = _Infinity()
P1Point = Union[PuiseuxNumber, _Infinity]


class PoleInDiscError(ValueError):
    pass


class DomainError(ValueError):
    """Raised when an input violates the fundamental-domain hypotheses."""


class DegenerateError(ValueError):
    pass


# -- log-distance predicates tolerant of truncation ------------------------

def _bound(x: PuiseuxNumber) -> tuple[Fraction, bool]:
    if x.terms:
        return -x.terms[0][0], True
    if x.trunc is None:
        return None, True  # exact zero
    return -x.trunc, False


def log_le(x: PuiseuxNumber, r: Fraction) -> bool:
    """Decide ``log|x| <= r``."""
    v, exact = _bound(x)
    if v is None:
        return True
    if exact:
        return v <= r
    if v <= r:
        return True
    raise PrecisionError(f"cannot decide log|x| <= {r} for x = {x}")


def log_lt(x: PuiseuxNumber, r: Fraction) -> bool:
    v, exact = _bound(x)
    if v is None:
        return True
    if exact:
        return v < r
    if v < r:
        return True
    raise PrecisionError(f"cannot decide log|x| < {r} for x = {x}")


# -- maps ------------------------------------------------------------------

@dataclass(frozen=True)
class MoebiusMap:
    """``z -> (a z + b) / (c z + d)``; matrices are taken up to scaling."""

    a: PuiseuxNumber
    b: PuiseuxNumber
    c: PuiseuxNumber
    d: PuiseuxNumber

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, PuiseuxNumber.coerce(getattr(self, name)))
        if self.det.is_zero():
            raise ValueError("singular Moebius matrix")

    @classmethod
    def identity(cls) -> MoebiusMap:
        return cls(ONE, ZERO, ZERO, ONE)

    @property
    def det(self) -> PuiseuxNumber:
        return self.a * self.d - self.b * self.c

    def matrix(self) -> tuple[tuple[PuiseuxNumber, PuiseuxNumber], tuple[PuiseuxNumber, PuiseuxNumber]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: MoebiusMap) -> MoebiusMap:
        """Composition ``self o other``."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> MoebiusMap:
        # adjugate; projectively equal to the inverse
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def pole(self) -> P1Point:
        if self.c.is_zero():
            return INF
        return -self.d / self.c

    def __call__(self, z: P1Point) -> P1Point:
        return moebius_apply(self, z)


def moebius_apply(m: MoebiusMap, z: P1Point) -> P1Point:
    if z is INF:
        if m.c.is_zero():
            return INF
        return m.a / m.c
    den = m.c * z + m.d
    if den.is_zero():
        return INF
    return (m.a * z + m.b) / den


def hyperbolic_generator(b, c, k) -> MoebiusMap:
    """Hyperbolic map with repelling fixed point ``b``, attracting fixed
    point ``c`` and multiplier ``k`` (``|k| < 1``)."""
    b, c, k = (PuiseuxNumber.coerce(x) for x in (b, c, k))
    return MoebiusMap(c - k * b, -(b * c) * (ONE - k), ONE - k, -(b - k * c))


# -- discs -----------------------------------------------------------------

@dataclass(frozen=True)
class Disc:
    """Closed disc ``{z : log|z - center| <= log_radius}``."""

    center: PuiseuxNumber
    log_radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", PuiseuxNumber.coerce(self.center))
        object.__setattr__(self, "log_radius", Fraction(self.log_radius))

    def contains(self, z: P1Point, *, open: bool = False) -> bool:
        if z is INF:
            return False
        diff = z - self.center
        return log_lt(diff, self.log_radius) if open else log_le(diff, self.log_radius)

    def same_as(self, other: Disc) -> bool:
        return (self.log_radius == other.log_radius
                and log_le(self.center - other.center, self.log_radius))

    def with_radius(self, r) -> Disc:
        return replace(self, log_radius=Fraction(r))


def image_of_disc(m: MoebiusMap, D: Disc) -> Disc:
    """Image of the closed disc ``D`` under ``m``; the pole must lie outside."""
    pole = m.pole()
    if pole is not INF and D.contains(pole):
        raise PoleInDiscError("pole in disc: image is not a disc")
    denom = m.c * D.center + m.d
    r = log_abs(m.det) + D.log_radius - 2 * log_abs(denom)
    return Disc(moebius_apply(m, D.center), r)


def image_of_complement(m: MoebiusMap, D: Disc) -> Disc:
    """Image of ``P^1 minus the open disc D``, a closed disc.

    The same center and radius describe the image of the complement of the
    closed disc, which is the corresponding open disc.
    """
    pole = m.pole()
    if pole is INF or not D.contains(pole, open=True):
        raise PoleInDiscError("pole outside open disc: image of complement is not a disc")
    r = log_abs(m.det) - 2 * log_abs(m.c) - D.log_radius
    return Disc(m.a / m.c, r)


# -- Schottky data ---------------------------------------------------------

DISC_LABELS = ("B1", "C1", "B2", "C2")


@dataclass(frozen=True)
class SchottkyRank2:
    gen1: MoebiusMap
    gen2: MoebiusMap
    B1: Disc
    C1: Disc
    B2: Disc
    C2: Disc

    def gen(self, i: int) -> MoebiusMap:
        return self.gen1 if i == 1 else self.gen2

    def disc(self, label: str) -> Disc:
        return getattr(self, label)

    def discs(self) -> dict[str, Disc]:
        return {lab: getattr(self, lab) for lab in DISC_LABELS}

    def b(self, i: int) -> PuiseuxNumber:
        return self.disc(f"B{i}").center

    def c(self, i: int) -> PuiseuxNumber:
        return self.disc(f"C{i}").center

    def r_plus(self, i: int) -> Fraction:
        return self.disc(f"B{i}").log_radius

    def r_minus(self, i: int) -> Fraction:
        return self.disc(f"C{i}").log_radius

    def invert_generator(self, i: int) -> SchottkyRank2:
        """Replace gamma_i by its inverse, which swaps B_i and C_i."""
        B, C = self.disc(f"B{i}"), self.disc(f"C{i}")
        return replace(self, **{f"gen{i}": self.gen(i).inverse(), f"B{i}": C, f"C{i}": B})

    def conjugate(self, g: MoebiusMap) -> SchottkyRank2:
        """Datum for ``g Gamma g^-1`` with discs ``g(D)``."""
        gi = g.inverse()
        return SchottkyRank2(
            g @ self.gen1 @ gi,
            g @ self.gen2 @ gi,
            *(image_of_disc(g, self.disc(lab)) for lab in DISC_LABELS),
        )


@dataclass
class VerificationReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append((name, bool(passed), detail))

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.checks)

    def failures(self) -> list[tuple[str, bool, str]]:
        return [c for c in self.checks if not c[1]]

    def __getitem__(self, name: str) -> bool:
        for n, p, _ in self.checks:
            if n == name:
                return p
        raise KeyError(name)


def verify_good_domain(S: SchottkyRank2) -> VerificationReport:
    """Check the good-fundamental-domain conditions; never raises."""
    rep = VerificationReport()
    discs = S.discs()
    labels = list(DISC_LABELS)
    for x in range(4):
        for y in range(x + 1, 4):
            D, E = discs[labels[x]], discs[labels[y]]
            name = f"disjoint {labels[x]} {labels[y]}"
            try:
                sep = not log_le(D.center - E.center, max(D.log_radius, E.log_radius))
                rep.add(name, sep, "" if sep else "discs overlap")
            except PrecisionError as exc:
                rep.add(name, False, str(exc))
    for lab in labels:
        D = discs[lab]
        try:
            rep.add(f"0 outside {lab}", not D.contains(ZERO))
        except PrecisionError as exc:
            rep.add(f"0 outside {lab}", False, str(exc))
    for i in (1, 2):
        g = S.gen(i)
        B, C = discs[f"B{i}"], discs[f"C{i}"]
        _map_check(rep, f"gamma{i}(P1 - B{i}°) = C{i}", g, B, C)
        # same formula read for the closed complement gives the open disc C_i°
        _map_check(rep, f"gamma{i}(P1 - B{i}) = C{i}°", g, B, C)
        _map_check(rep, f"gamma{i}^-1(P1 - C{i}°) = B{i}", g.inverse(), C, B)
        _map_check(rep, f"gamma{i}^-1(P1 - C{i}) = B{i}°", g.inverse(), C, B)
    return rep


def _map_check(rep, name, g, src, target):
    try:
        img = image_of_complement(g, src)
        ok = img.same_as(target)
        detail = "" if ok else f"image is disc({img.center}, {img.log_radius})"
        rep.add(name, ok, detail)
    except (PoleInDiscError, PrecisionError, ValueError) as exc:
        rep.add(name, False, str(exc))


# -- normalization ---------------------------------------------------------

def _la(x: PuiseuxNumber) -> Fraction:
    return log_abs(x)


def cross_ratio_log(S: SchottkyRank2) -> Fraction:
    """``log(|b2-c1||c2-b1| / (|b2-b1||c2-c1|))``, a conjugation invariant."""
    b1, c1, b2, c2 = S.b(1), S.c(1), S.b(2), S.c(2)
    return _la(b2 - c1) + _la(c2 - b1) - _la(b2 - b1) - _la(c2 - c1)


def is_normalized(S: SchottkyRank2) -> bool:
    b1, c1, b2, c2 = (_la(S.b(1)), _la(S.c(1)), _la(S.b(2)), _la(S.c(2)))
    if not (b1 < c1 < c2 and b1 < b2 < c2):
        return False
    if cross_ratio_log(S) != 0:
        return b2 < c1
    return True


def _step_exponent(low: Fraction, high: Fraction) -> Fraction:
    # t^e has log-abs -e; choose the log-abs midway between the bounds
    return -(low + high) / 2


def _near(center: PuiseuxNumber, low: Fraction, high: Fraction) -> PuiseuxNumber:
    return center + PuiseuxNumber.monomial(_step_exponent(low, high))


def sortieren_conjugator(S: SchottkyRank2, near_p: str = "B1") -> MoebiusMap:
    """``z -> (z - p)/(z - q)`` with p close to the disc ``near_p`` and q
    close to ``C2``, both just outside, as in the ordering argument."""
    discs = S.discs()
    P = discs[near_p]
    others_p = [discs[l].center for l in DISC_LABELS if l != near_p]
    m_p = min(_la(P.center - x) for x in others_p)
    p = _near(P.center, P.log_radius, m_p)
    Q = discs["C2"]
    m_q = min(_la(Q.center - discs[l].center) for l in DISC_LABELS if l != "C2")
    q = _near(Q.center, Q.log_radius, m_q)
    return MoebiusMap(ONE, -p, ONE, -q)


def normalize(S: SchottkyRank2) -> SchottkyRank2:
    """Conjugate and relabel so that ``|b1|<|c1|<|c2|`` and ``|b1|<|b2|<|c2|``,
    and additionally ``|b2|<|c1|`` when the cycles share an edge."""
    rep = verify_good_domain(S)
    if not rep.ok:
        raise DomainError("not a good fundamental domain: "
                          + "; ".join(n for n, _, _ in rep.failures()))
    if is_normalized(S):
        return S
    cand = None
    for inv1 in (False, True):
        for inv2 in (False, True):
            T = S.invert_generator(1) if inv1 else S
            T = T.invert_generator(2) if inv2 else T
            b1, c1, b2, c2 = T.b(1), T.c(1), T.b(2), T.c(2)
            top = _la(c2 - b1)
            if top >= max(_la(c1 - b1), _la(c2 - b2), _la(c2 - c1), _la(b2 - b1)):
                cand = T
                break
        if cand is not None:
            break
    if cand is None:
        raise DomainError("no generator orientation satisfies the ordering hypothesis")
    out = cand.conjugate(sortieren_conjugator(cand, "B1"))
    shared = cross_ratio_log(out) != 0
    if shared and _la(out.b(2)) == _la(out.c(1)):
        out = out.conjugate(sortieren_conjugator(out, "C1")).invert_generator(1)
    if not is_normalized(out):
        raise DomainError("normalization failed to reach the ordered form")
    post = verify_good_domain(out)
    if not post.ok:
        raise DomainError("normalized datum fails verification: "
                          + "; ".join(n for n, _, _ in post.failures()))
    return out


# -- u-functions and periods -----------------------------------------------

def _outside_open_discs(S: SchottkyRank2, z: P1Point) -> bool:
    return not any(D.contains(z, open=True) for D in S.discs().values())


def u_log_abs(S: SchottkyRank2, i: int, z: PuiseuxNumber) -> Fraction:
    """``log|u_i(z)| = log|z - b_i| - log|z - c_i|`` on the closed
    fundamental domain."""
    if not _outside_open_discs(S, z):
        raise DomainError("outside fundamental domain hypothesis")
    return _la(z - S.b(i)) - _la(z - S.c(i))


LETTERS = ((1, 1), (1, -1), (2, 1), (2, -1))


def reduced_words(L: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Reduced words of length ``<= L`` as tuples of ``(generator, sign)``;
    the first letter is applied last (leftmost factor)."""
    if L < 0:
        raise ValueError("L must be non-negative")
    yield ()
    frontier: list[tuple] = [()]
    for _ in range(L):
        nxt = []
        for w in frontier:
            for letter in LETTERS:
                if w and w[0] == (letter[0], -letter[1]):
                    continue
                nxt.append((letter,) + w)
        yield from nxt
        frontier = nxt


def word_count(L: int) -> int:
    return 1 + sum(4 * 3 ** (m - 1) for m in range(1, L + 1))


def _letter_map(S: SchottkyRank2, letter) -> MoebiusMap:
    g = S.gen(letter[0])
    return g if letter[1] == 1 else g.inverse()


def word_maps(S: SchottkyRank2, L: int) -> Iterator[tuple[tuple, MoebiusMap]]:
    """Pairs ``(word, matrix)`` for all reduced words up to length L."""
    letters = {l: _letter_map(S, l) for l in LETTERS}
    frontier = [((), MoebiusMap.identity())]
    yield frontier[0]
    for _ in range(L):
        nxt = []
        for w, M in frontier:
            for letter in LETTERS:
                if w and w[0] == (letter[0], -letter[1]):
                    continue
                nxt.append(((letter,) + w, letters[letter] @ M))
        yield from nxt
        frontier = nxt


_ORBITS: dict[tuple, tuple[int, dict]] = {}


def orbit_points(S: SchottkyRank2, a: PuiseuxNumber, L: int) -> dict[tuple, P1Point]:
    """``{word: word(a)}`` for reduced words up to length L, grown one
    letter at a time from the identity.

    Results are cached per datum, basepoint and working precision and
    extended on demand.
    """
    key = (S, a, get_precision())
    depth, points = _ORBITS.get(key, (0, {(): a}))
    if depth >= L:
        return {w: p for w, p in points.items() if len(w) <= L}
    letters = {l: _letter_map(S, l) for l in LETTERS}
    points = dict(points)
    frontier = [(w, p) for w, p in points.items() if len(w) == depth]
    for _ in range(depth, L):
        nxt = []
        for w, pt in frontier:
            for letter in LETTERS:
                if w and w[0] == (letter[0], -letter[1]):
                    continue
                img = moebius_apply(letters[letter], pt)
                points[(letter,) + w] = img
                nxt.append(((letter,) + w, img))
        frontier = nxt
    if len(_ORBITS) > 16:
        _ORBITS.clear()
    _ORBITS[key] = (L, points)
    return points


def u_log_abs_truncated(S: SchottkyRank2, i: int, z: PuiseuxNumber,
                        a: PuiseuxNumber, L: int) -> Fraction:
    """Partial product over reduced words of length ``<= L``:
    ``sum log|z - w a| - log|z - w gamma_i a|``."""
    orbit = orbit_points(S, a, L + 1)
    total = Fraction(0)
    for w in reduced_words(L):
        # w gamma_i as a reduced word; gamma_i is applied first
        wi = w[:-1] if w and w[-1] == (i, -1) else w + ((i, 1),)
        vals = []
        for pt in (orbit[w], orbit[wi]):
            if pt is INF:
                raise DegenerateError("orbit point at infinity")
            v = _la(z - pt)
            if v == float("-inf"):
                raise DegenerateError("z coincides with an orbit point")
            vals.append(v)
        total += vals[0] - vals[1]
    return total


@dataclass(frozen=True)
class PeriodMatrix:
    logq: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

    def __post_init__(self):
        q = tuple(tuple(Fraction(x) for x in row) for row in self.logq)
        object.__setattr__(self, "logq", q)
        if q[0][1] != q[1][0]:
            raise ValueError("period matrix must be symmetric")
        if not (q[0][0] < 0 and q[1][1] < 0):
            raise ValueError("diagonal entries must be negative")
        if q[0][1] > 0:
            raise ValueError("off-diagonal entry must be <= 0")

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.logq[i - 1][j - 1]

    @property
    def L1(self) -> Fraction:
        return -self.logq[0][0]

    @property
    def L2(self) -> Fraction:
        return -self.logq[1][1]

    @property
    def shared(self) -> Fraction:
        return -self.logq[0][1]


def log_q(S: SchottkyRank2) -> PeriodMatrix:
    for i in (1, 2):
        if not _la(S.b(i)) < _la(S.c(i)):
            raise DomainError(f"log_q needs |b{i}| < |c{i}|")
    diag = [-(2 * _la(S.c(i)) - S.r_plus(i) - S.r_minus(i)) for i in (1, 2)]
    off = -cross_ratio_log(S)
    return PeriodMatrix(((diag[0], off), (off, diag[1])))
