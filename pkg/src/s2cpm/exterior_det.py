"""Exact rational scalars, the det^{S^2} map on six planar vectors, and
exact determinant / rank / nullspace for rational matrices.

Every scalar is a :class:`fractions.Fraction`; nothing here touches binary
floating point, so zero tests are decidable.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import NamedTuple, Sequence, Union

RationalLike = Union[Fraction, int, str]

Matrix = list[list[Fraction]]


class NonSquare(ValueError):
    """Raised when a determinant is requested for a non-square matrix."""


def rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to an exact :class:`Fraction`.

    Strings are read as exact decimals (``"0.007"`` is 7/1000) or as
    fractions (``"1/3"``).  Floats are refused.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact scalar {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        low = text.lower()
        if "nan" in low or "inf" in low:
            raise ValueError(f"not a finite rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


class Vec2(NamedTuple):
    a: Fraction
    b: Fraction


# (1,2),(2,3),(3,4),(1,3),(2,4),(1,4)
SIX_PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4))


def six_columns(columns: Sequence[Sequence[RationalLike]]) -> tuple[Vec2, ...]:
    """Validate and normalise six 2-vectors given in canonical pair order."""
    if len(columns) != 6:
        raise ValueError(f"det^S2 takes exactly six columns, got {len(columns)}")
    out = []
    for col in columns:
        if len(col) != 2:
            raise ValueError(f"each column must have two coordinates, got {len(col)}")
        out.append(Vec2(rational(col[0]), rational(col[1])))
    return tuple(out)


def det_s2(columns: Sequence[Sequence[RationalLike]]) -> Fraction:
    """The 12-term det^{S^2} polynomial.

    ``columns`` are v_{1,2}, v_{2,3}, v_{3,4}, v_{1,3}, v_{2,4}, v_{1,4},
    each a pair (alpha, beta).
    """
    (a12, b12), (a23, b23), (a34, b34), (a13, b13), (a24, b24), (a14, b14) = six_columns(columns)
    return (
        a12 * a23 * a34 * b13 * b24 * b14
        + a12 * b23 * a34 * b13 * b24 * a14
        + a12 * b23 * b34 * a13 * a24 * b14
        + b12 * b23 * a34 * a13 * a24 * b14
        + b12 * a23 * b34 * b13 * a24 * a14
        + b12 * a23 * b34 * a13 * b24 * a14
        - b12 * b23 * b34 * a13 * a24 * a14
        - b12 * a23 * b34 * a13 * a24 * b14
        - b12 * a23 * a34 * b13 * b24 * a14
        - a12 * a23 * b34 * b13 * b24 * a14
        - a12 * b23 * a34 * a13 * b24 * b14
        - a12 * b23 * a34 * b13 * a24 * b14
    )


def companion_matrix(columns: Sequence[Sequence[RationalLike]]) -> Matrix:
    """The 6x6 matrix whose ordinary determinant equals det^{S^2}.

    Row pairs correspond to the triples (1,2,3), (1,2,4), (1,3,4); it is
    also the coefficient matrix of the weight system for s=4, d=2.
    """
    (a12, b12), (a23, b23), (a34, b34), (a13, b13), (a24, b24), (a14, b14) = six_columns(columns)
    z = Fraction(0)
    return [
        [a12, a23, z, -a13, z, z],
        [b12, b23, z, -b13, z, z],
        [a12, z, z, z, a24, -a14],
        [b12, z, z, z, b24, -b14],
        [z, z, a34, a13, z, -a14],
        [z, z, b34, b13, z, -b14],
    ]


def det_s2_companion(columns: Sequence[Sequence[RationalLike]]) -> Fraction:
    return det_exact(companion_matrix(columns))


def as_matrix(rows: Sequence[Sequence[RationalLike]]) -> Matrix:
    m = [[rational(x) for x in row] for row in rows]
    if m and any(len(row) != len(m[0]) for row in m):
        raise ValueError("ragged matrix")
    return m


def _integer_rows(m: Matrix) -> tuple[list[list[int]], Fraction]:
    """Clear denominators row by row; return integer rows and the scale
    ``c`` with det(m) = det(int_rows) * c."""
    rows = []
    scale = Fraction(1)
    for row in m:
        den = lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * den) for x in row])
        scale /= den
    return rows, scale


def det_exact(m: Sequence[Sequence[RationalLike]]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    mat = as_matrix(m)
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise NonSquare(f"matrix is {n}x{len(mat[0]) if mat else 0}")
    if n == 0:
        return Fraction(1)
    a, scale = _integer_rows(mat)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1] * scale


def row_echelon(m: Sequence[Sequence[RationalLike]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q. Returns (rref, pivot_columns)."""
    a = [row[:] for row in as_matrix(m)]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank_exact(m: Sequence[Sequence[RationalLike]]) -> int:
    return len(row_echelon(m)[1])


def nullspace_exact(m: Sequence[Sequence[RationalLike]], cols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right nullspace {x : m x = 0}.

    ``cols`` is needed only when ``m`` has no rows.  Basis vectors are the
    standard ones attached to free columns (free coordinate = 1).
    """
    rref, pivots = row_echelon(m)
    n = len(rref[0]) if rref else (cols or 0)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -rref[r][f]
        basis.append(x)
    return basis
