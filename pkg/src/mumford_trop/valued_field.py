"""Truncated generalized power series in ``t`` over the rationals.

Elements are finite sums ``sum c_e t^e`` with rational exponents, optionally
followed by an error term ``O(t^N)``.  The absolute value is normalized by
``log|t| = -1`` so that ``log|x| = -(least exponent)`` and the value group is
the rationals.
"""

from __future__ import annotations

import contextlib
import math
import os
import re
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Union

Rat = Fraction
RatLike = Union[int, str, Fraction]

NEG_INF = float("-inf")

PRECISION_ENV = "MUMFORD_TROP_PRECISION"

_precision: ContextVar[Fraction] = ContextVar(
    "precision", default=Fraction(os.environ.get(PRECISION_ENV, "32"))
)


class PrecisionError(ArithmeticError):
    """Leading terms cancelled below the truncation order."""


class PuiseuxParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position + 1} in {text!r}")


def get_precision() -> Fraction:
    return _precision.get()


@contextlib.contextmanager
def working_precision(value: RatLike) -> Iterator[None]:
    """Temporarily set the relative precision used by inversion."""
    token = _precision.set(Fraction(value))
    try:
        yield
    finally:
        _precision.reset(token)


def rat(value: RatLike) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def _num(value):
    # integral rationals are kept as ints internally; arithmetic stays exact
    if isinstance(value, int):
        return value
    value = rat(value)
    return value.numerator if value.denominator == 1 else value


def _min_trunc(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class PuiseuxNumber:
    """An element of K, possibly known only up to ``O(t^trunc)``.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs with strictly
    increasing exponents and nonzero coefficients; ``trunc`` is ``None`` for
    exact elements.
    """

    terms: tuple[tuple[Fraction, Fraction], ...] = ()
    trunc: Fraction | None = None

    def __post_init__(self):
        prev = None
        for e, c in self.terms:
            if c == 0:
                raise ValueError("zero coefficient stored")
            if prev is not None and e <= prev:
                raise ValueError("exponents must be strictly increasing")
            if self.trunc is not None and e >= self.trunc:
                raise ValueError("term at or beyond truncation order")
            prev = e

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[RatLike, RatLike]],
                   trunc: RatLike | None = None) -> PuiseuxNumber:
        """Collect ``(exponent, coefficient)`` pairs, dropping zeros and
        anything at or past ``trunc``."""
        acc: dict[Fraction, Fraction] = {}
        for e, c in pairs:
            e = _num(e)
            acc[e] = _num(acc.get(e, 0) + _num(c))
        t = None if trunc is None else _num(trunc)
        items = tuple(
            (e, c) for e, c in sorted(acc.items())
            if c != 0 and (t is None or e < t)
        )
        return cls._raw(items, t)

    @classmethod
    def _raw(cls, terms, trunc) -> PuiseuxNumber:
        # trusted constructor: terms already sorted, nonzero, below trunc
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "trunc", trunc)
        return obj

    @classmethod
    def _collect(cls, acc: dict, trunc) -> PuiseuxNumber:
        return cls._raw(tuple((e, c) for e, c in sorted(acc.items()) if c), trunc)

    @classmethod
    def const(cls, c: RatLike) -> PuiseuxNumber:
        return cls.from_terms([(0, c)])

    @classmethod
    def monomial(cls, exponent: RatLike, coeff: RatLike = 1) -> PuiseuxNumber:
        return cls.from_terms([(exponent, coeff)])

    @classmethod
    def coerce(cls, value) -> PuiseuxNumber:
        if isinstance(value, PuiseuxNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        if isinstance(value, str):
            return parse_puiseux(value)
        raise TypeError(f"cannot coerce {value!r} to PuiseuxNumber")

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        """True for the exact zero; truncated zeros raise PrecisionError."""
        if self.terms:
            return False
        if self.trunc is not None:
            raise PrecisionError(f"value is O(t^{self.trunc}); sign of zero undecidable")
        return True

    @property
    def exact(self) -> bool:
        return self.trunc is None

    @property
    def valuation(self) -> Fraction:
        if not self.terms:
            if self.trunc is None:
                raise ValueError("valuation of zero")
            raise PrecisionError(f"value is O(t^{self.trunc})")
        return rat(self.terms[0][0])

    def leading(self) -> tuple[Fraction, Fraction]:
        return self.valuation, self.terms[0][1]

    def agrees_with(self, other: PuiseuxNumber) -> bool:
        """Equality of all coefficients below the common truncation order."""
        t = _min_trunc(self.trunc, other.trunc)
        a = {e: c for e, c in self.terms if t is None or e < t}
        b = {e: c for e, c in other.terms if t is None or e < t}
        return a == b

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> PuiseuxNumber:
        return PuiseuxNumber._raw(tuple((e, -c) for e, c in self.terms), self.trunc)

    def __add__(self, other) -> PuiseuxNumber:
        other = _operand(other)
        if other is NotImplemented:
            return other
        t = _min_trunc(self.trunc, other.trunc)
        acc = {}
        for e, c in self.terms:
            if t is None or e < t:
                acc[e] = c
        for e, c in other.terms:
            if t is None or e < t:
                acc[e] = acc[e] + c if e in acc else c
        return PuiseuxNumber._collect(acc, t)

    __radd__ = __add__

    def __sub__(self, other) -> PuiseuxNumber:
        other = _operand(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> PuiseuxNumber:
        return (-self) + other

    def __mul__(self, other) -> PuiseuxNumber:
        other = _operand(other)
        if other is NotImplemented:
            return other
        if (not self.terms and self.trunc is None) or (not other.terms and other.trunc is None):
            return ZERO
        # an O(t^N) factor contributes O(t^(N + val(other)))
        trunc = None
        if self.trunc is not None:
            trunc = self.trunc + (other.terms[0][0] if other.terms else other.trunc)
        if other.trunc is not None:
            t2 = other.trunc + (self.terms[0][0] if self.terms else self.trunc)
            trunc = _min_trunc(trunc, t2)
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if trunc is not None and e >= trunc:
                    break
                acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
        return PuiseuxNumber._collect(acc, trunc)

    __rmul__ = __mul__

    def inverse(self, precision: RatLike | None = None) -> PuiseuxNumber:
        return vf_inv(self, precision)

    def __truediv__(self, other) -> PuiseuxNumber:
        other = _operand(other)
        if other is NotImplemented:
            return other
        return self * vf_inv(other)

    def __rtruediv__(self, other) -> PuiseuxNumber:
        return PuiseuxNumber.coerce(other) * vf_inv(self)

    def __pow__(self, n: int) -> PuiseuxNumber:
        if n < 0:
            return vf_inv(self) ** (-n)
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __str__(self) -> str:
        return format_puiseux(self)

    def __repr__(self) -> str:
        return f"PuiseuxNumber({format_puiseux(self)!r})"


def _operand(value):
    if isinstance(value, PuiseuxNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return PuiseuxNumber.const(value)
    return NotImplemented


ZERO = PuiseuxNumber()
ONE = PuiseuxNumber.const(1)
T = PuiseuxNumber.monomial(1)


def vf_add(x: PuiseuxNumber, y: PuiseuxNumber) -> PuiseuxNumber:
    return x + y


def vf_mul(x: PuiseuxNumber, y: PuiseuxNumber) -> PuiseuxNumber:
    return x * y


def vf_inv(x: PuiseuxNumber, precision: RatLike | None = None) -> PuiseuxNumber:
    """Inverse of ``x`` to ``precision`` exponent units past its leading term.

    Monomials invert exactly.  Otherwise ``x = c t^e (1 + y)`` with
    ``val(y) > 0`` and the coefficients of ``1/(1 + y)`` are found one at a
    time on the exponent lattice of ``y``.
    """
    if not x.terms:
        if x.trunc is None:
            raise ZeroDivisionError("division by zero")
        raise PrecisionError("division by a truncated zero")
    e0, c0 = x.terms[0]
    if len(x.terms) == 1 and x.trunc is None:
        return PuiseuxNumber(((-e0, _num(Fraction(1) / c0)),))
    prec = get_precision() if precision is None else rat(precision)
    if x.trunc is not None:
        prec = min(prec, rat(x.trunc - e0))
    # x = c0 t^e0 (1 + y); the exponents of y lie on the lattice (1/den) Z
    den = 1
    for e, _ in x.terms[1:]:
        den = den * (e - e0).denominator // gcd(den, (e - e0).denominator)
    y = {}
    for e, c in x.terms[1:]:
        k = (e - e0) * den
        if k < prec * den:
            y[int(k)] = Fraction(c) / c0
    n_max = math.ceil(prec * den)
    # coefficients of 1/(1 + y) by long division
    d = [Fraction(1)] + [Fraction(0)] * (n_max - 1)
    ys = sorted(y.items())
    for n in range(1, n_max):
        acc = Fraction(0)
        for k, yk in ys:
            if k > n:
                break
            if d[n - k]:
                acc -= yk * d[n - k]
        d[n] = acc
    inv_c0 = Fraction(1) / c0
    pairs = [(Fraction(n, den) - e0, dn * inv_c0) for n, dn in enumerate(d) if dn]
    return PuiseuxNumber.from_terms(pairs, prec - e0)


def log_abs(x: PuiseuxNumber) -> Fraction | float:
    """``log|x| = -val(x)``; ``-inf`` for the exact zero.

    Raises PrecisionError when ``x`` is a truncated zero, i.e. its leading
    term cancelled below the known precision.
    """
    if not x.terms:
        if x.trunc is None:
            return NEG_INF
        raise PrecisionError(f"log|x| undetermined: x = O(t^{x.trunc})")
    return Fraction(-x.terms[0][0])


def log_dist(x: PuiseuxNumber, y: PuiseuxNumber) -> Fraction | float:
    return log_abs(x - y)


# -- text form -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<t>t)|(?P<op>[-+*^()])|(?P<O>O))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text.replace("−", "-")
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        i = 0
        src = self.text
        while i < len(src):
            if src[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(src, i)
            if not m or m.end() == i:
                raise PuiseuxParseError(f"unexpected character {src[i]!r}", text, i)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            i = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def fail(self, message: str):
        tok = self.peek()
        pos = tok[2] if tok else len(self.text)
        raise PuiseuxParseError(message, self.text, pos)

    def take(self, kind: str, value: str | None = None):
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            self.fail(f"expected {value or kind}")
        self.i += 1
        return tok

    def accept(self, kind: str, value: str | None = None):
        tok = self.peek()
        if tok is not None and tok[0] == kind and (value is None or tok[1] == value):
            self.i += 1
            return tok
        return None

    def rational(self, text: str) -> Fraction:
        try:
            return Fraction(text)
        except ZeroDivisionError:
            self.fail(f"zero denominator in {text!r}")

    def signed_rational(self) -> Fraction:
        sign = -1 if self.accept("op", "-") else 1
        return sign * self.rational(self.take("num")[1])

    def exponent(self) -> Fraction:
        if self.accept("op", "("):
            e = self.signed_rational()
            self.take("op", ")")
            return e
        sign = -1 if self.accept("op", "-") else 1
        tok = self.take("num")
        if "/" in tok[1]:
            raise PuiseuxParseError("fractional exponent must be parenthesized",
                                    self.text, tok[2])
        return sign * self.rational(tok[1])

    def parse(self) -> PuiseuxNumber:
        pairs: list[tuple[Fraction, Fraction]] = []
        trunc = None
        sign = 1
        if self.accept("op", "-"):
            sign = -1
        elif self.accept("op", "+"):
            pass
        while True:
            if self.peek() is None:
                self.fail("expected a term")
            if self.accept("O"):
                if trunc is not None:
                    self.fail("duplicate O-term")
                self.take("op", "(")
                self.take("t")
                trunc = self.exponent() if self.accept("op", "^") else Fraction(1)
                self.take("op", ")")
            else:
                coeff = Fraction(1)
                num = self.accept("num")
                if num:
                    coeff = self.rational(num[1])
                    if self.accept("op", "*"):
                        self.take("t")
                        has_t = True
                    else:
                        has_t = bool(self.accept("t"))
                else:
                    self.take("t")
                    has_t = True
                e = Fraction(0)
                if has_t:
                    e = self.exponent() if self.accept("op", "^") else Fraction(1)
                pairs.append((e, sign * coeff))
            tok = self.peek()
            if tok is None:
                break
            if tok[0] == "op" and tok[1] in "+-":
                sign = 1 if tok[1] == "+" else -1
                self.i += 1
                continue
            self.fail("expected '+' or '-'")
        if trunc is not None:
            bad = [e for e, _ in pairs if e >= trunc]
            if bad:
                raise PuiseuxParseError("term beyond O-term", self.text, len(self.text) - 1)
        return PuiseuxNumber.from_terms(pairs, trunc)


def parse_puiseux(text: str) -> PuiseuxNumber:
    """Parse e.g. ``"3*t^(1/2) + t - 1/2 + O(t^4)"``."""
    return _Parser(text).parse()


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e})"


def _fmt_monomial(e: Fraction, c: Fraction) -> str:
    if e == 0:
        return str(c)
    tpart = "t" if e == 1 else f"t^{_fmt_exp(e)}"
    if c == 1:
        return tpart
    return f"{c}*{tpart}"


def format_puiseux(x: PuiseuxNumber) -> str:
    parts: list[str] = []
    for e, c in x.terms:
        neg = c < 0
        mono = _fmt_monomial(e, -c if neg else c)
        if not parts:
            parts.append(f"-{mono}" if neg else mono)
        else:
            parts.append(f"{'-' if neg else '+'} {mono}")
    if x.trunc is not None:
        o = "O(t)" if x.trunc == 1 else f"O(t^{_fmt_exp(x.trunc)})"
        parts.append(f"+ {o}" if parts else o)
    return " ".join(parts) if parts else "0"
