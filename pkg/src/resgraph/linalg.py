"""Exact rational linear algebra for intersection matrices.

Everything here works over the integers with fraction-free (Bareiss)
elimination, so intermediate values stay integral and no rounding can occur.
Rationals are :class:`fractions.Fraction`, which is always kept in lowest
terms with a positive denominator.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Rational = Fraction

Matrix = Sequence[Sequence[int]]


class NotInvertibleError(ValueError):
    """Raised when a linear system has a singular coefficient matrix."""


class NotSymmetricError(ValueError):
    """Raised when a symmetric matrix was required."""


def _check_square(m: Matrix) -> int:
    n = len(m)
    for i, row in enumerate(m):
        if len(row) != n:
            raise ValueError(f"matrix is not square: row {i} has {len(row)} entries, expected {n}")
    return n


def is_symmetric(m: Matrix) -> bool:
    n = _check_square(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def leading_minors(m: Matrix) -> list[int]:
    """Leading principal minors ``det(m[:k, :k])`` for ``k = 1..n``.

    Computed by Bareiss elimination without pivoting: after step ``k`` the
    pivot entry equals the ``(k+1)``-th leading minor.  Once a minor vanishes
    elimination cannot continue; the remaining minors are then computed
    directly by :func:`determinant`.
    """
    n = _check_square(m)
    a = [list(map(int, row)) for row in m]
    minors: list[int] = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            minors.extend(determinant([row[:j] for row in m[:j]]) for j in range(k + 2, n + 1))
            return minors
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
        prev = pivot
    return minors


def determinant(m: Matrix) -> int:
    """Exact determinant of a square integer matrix (Bareiss with row pivoting)."""
    n = _check_square(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def is_negative_definite(m: Matrix) -> bool:
    """True iff ``(-1)**k * det(leading k x k minor) > 0`` for every ``k``.

    Raises :class:`NotSymmetricError` for a non-symmetric input.
    """
    if not is_symmetric(m):
        raise NotSymmetricError("negative-definiteness is only defined here for symmetric matrices")
    n = len(m)
    a = [list(map(int, row)) for row in m]
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        # pivot is the (k+1)-th leading minor; its sign must be (-1)**(k+1)
        if pivot == 0 or (pivot > 0) != (k % 2 == 1):
            return False
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
        prev = pivot
    return True


def solve_linear_system(m: Matrix, rhs: Sequence[Rational | int]) -> list[Rational]:
    """Solve ``m x = rhs`` exactly.

    Uses fraction-free Gauss-Jordan elimination on ``[m | L*rhs]`` where ``L``
    clears the denominators of ``rhs``; at the end every diagonal entry is
    ``+-det(m)`` and the augmented column holds the Cramer numerators.  The
    solution is checked by substituting it back into the original system
    before it is returned.
    """
    n = _check_square(m)
    if len(rhs) != n:
        raise ValueError(f"right-hand side has length {len(rhs)}, expected {n}")
    if n == 0:
        return []
    b = [Fraction(v) for v in rhs]
    scale = lcm(*(v.denominator for v in b))
    scaled = [int(v * scale) for v in b]
    a = [list(map(int, row)) + [v] for row, v in zip(m, scaled)]
    width = n + 1
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                raise NotInvertibleError("matrix is not invertible")
            a[k], a[swap] = a[swap], a[k]
        row_k = a[k]
        pivot = row_k[k]
        for i in range(n):
            if i == k:
                continue
            row_i = a[i]
            aik = row_i[k]
            for j in range(width):
                if j != k:
                    row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    # every diagonal entry is now the (signed) determinant
    det = a[n - 1][n - 1]
    numerators = [a[i][n] for i in range(n)]
    for i, row in enumerate(m):
        if a[i][i] != det or sum(c * x for c, x in zip(row, numerators)) != scaled[i] * det:
            raise ArithmeticError(f"back-substitution failed in row {i}")
    denominator = det * scale
    return [Fraction(x, denominator) for x in numerators]
