"""Exact solution of small rational linear systems (thin wrapper over
sympy's dense matrices over QQ)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


class SingularSystemError(ArithmeticError):
    pass


class InconsistentSystemError(ArithmeticError):
    pass


def _qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def solve_exact(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """The unique ``x`` with ``A x = b``.  ``A`` may have more rows than
    columns as long as the system is consistent and of full column rank."""
    rows, cols = len(A), len(A[0]) if A else 0
    aug = [[_qq(v) for v in row] + [_qq(bi)] for row, bi in zip(A, b)]
    M = DomainMatrix(aug, (rows, cols + 1), QQ)
    R, pivots = M.rref()
    if cols in pivots:
        raise InconsistentSystemError("system has no solution")
    if len(pivots) < cols:
        raise SingularSystemError(f"rank {len(pivots)} < {cols} unknowns")
    R = R.to_list()
    return [_frac(R[k][cols]) for k in range(cols)]
