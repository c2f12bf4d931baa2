"""Exact linear algebra over the rationals and the integers.

Matrices are plain nested sequences.  Right-hand sides may live in any
Q-vector space whose elements support addition and scaling by Fraction
(PiPoly in particular); Gaussian elimination only ever divides by
rational pivots, so solutions stay inside that space.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, TypeVar

from .errors import DomainError

T = TypeVar("T")

Matrix = list[list[Fraction]]


def _to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = _to_matrix(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right null space {x : A x = 0}."""
    if not rows:
        return []
    ncols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][fc]
        basis.append(vec)
    return basis


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*rows)] if rows else []


def left_nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {y : y^T A = 0}."""
    return nullspace(transpose(rows))


def solve(rows: Sequence[Sequence], rhs: Sequence[T]) -> list[T] | None:
    """One exact solution of A x = b, or None if the system is inconsistent.

    Free variables are set to zero.  The rhs entries may be Fraction,
    PiPoly, or anything closed under addition and Fraction scaling.
    """
    m = _to_matrix(rows)
    if len(m) != len(rhs):
        raise DomainError("dimension mismatch in solve()")
    b = list(rhs)
    if not m:
        return []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        b[r], b[pivot_row] = b[pivot_row], b[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        b[r] = b[r] * (1 / pv)
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * x for a, x in zip(m[i], m[r])]
                b[i] = b[i] + b[r] * (-f)
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    zero = b[0] * 0 if b else None
    for i in range(r, len(m)):
        if b[i] != zero:
            return None
    solution = [b[0] * 0 for _ in range(ncols)]
    for row_idx, col in enumerate(pivots):
        solution[col] = b[row_idx]
    return solution


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant of a square rational matrix (fraction-free on request)."""
    m = _to_matrix(rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise DomainError("determinant of a non-square matrix")
    result = Fraction(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            result = -result
        pv = m[c][c]
        result *= pv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def smith_normal_form(rows: Sequence[Sequence[int]]) -> list[int]:
    """Elementary divisors d_1 | d_2 | ... of an integer matrix.

    Classic reduction by row/column operations over Z; returned divisors
    are non-negative and only the nonzero ones are listed.
    """
    m = [[int(x) for x in row] for row in rows]
    if not m or not m[0]:
        return []
    nrows, ncols = len(m), len(m[0])
    divisors: list[int] = []
    top = 0
    while top < min(nrows, ncols):
        # Find the nonzero entry of least magnitude in the working block.
        best = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        m[top], m[bi] = m[bi], m[top]
        for row in m:
            row[top], row[bj] = row[bj], row[top]
        pivot = m[top][top]
        reduced = True
        for i in range(top + 1, nrows):
            q = m[i][top] // pivot
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[top])]
            if m[i][top] != 0:
                reduced = False
        for j in range(top + 1, ncols):
            q = m[top][j] // pivot
            if q:
                for row in m:
                    row[j] -= q * row[top]
            if m[top][j] != 0:
                reduced = False
        if not reduced:
            continue
        # Pivot must divide every remaining entry for the divisor chain.
        offender = None
        for i in range(top + 1, nrows):
            for j in range(top + 1, ncols):
                if m[i][j] % pivot != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            m[top] = [a + b for a, b in zip(m[top], m[offender])]
            continue
        divisors.append(abs(pivot))
        top += 1
    return divisors
