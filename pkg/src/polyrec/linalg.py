"""Exact linear algebra over the rationals.

Rows are cleared to integers and reduced with fraction-free (integer-only)
Gauss-Jordan steps; each row is divided by its content after every
elimination so intermediate sizes stay close to the Bareiss bound.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

__all__ = ["integer_rows", "row_reduce", "rank", "nullspace", "canonical_basis",
           "det", "in_span"]


def _primitive(row: list[int]) -> list[int]:
    g = reduce(gcd, row, 0)
    if g > 1:
        return [x // g for x in row]
    return row


def integer_rows(matrix: Sequence[Sequence]) -> list[list[int]]:
    """Scale every row by the lcm of its denominators."""
    out = []
    for row in matrix:
        fr = [Fraction(x) for x in row]
        m = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([(x * m).numerator for x in fr])
    return out


def row_reduce(matrix: Sequence[Sequence], ncols: int | None = None):
    """Integer reduced row echelon form.

    Returns ``(rows, pivots)``: ``rows[i]`` is a primitive integer row whose
    pivot entry ``rows[i][pivots[i]]`` is positive and whose other pivot
    columns are zero.  Dividing each row by its pivot gives the rational RREF.
    """
    rows = [r for r in (_primitive(r) for r in integer_rows(matrix)) if any(r)]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        best = None
        for i in range(r, len(rows)):
            v = rows[i][c]
            # smallest nonzero pivot keeps entries short
            if v and (best is None or abs(v) < best):
                piv, best = i, abs(v)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        if p[c] < 0:
            p = rows[r] = [-x for x in p]
        pc = p[c]
        for i in range(len(rows)):
            if i == r:
                continue
            a = rows[i][c]
            if a:
                g = gcd(pc, a)
                f1, f2 = pc // g, a // g
                rows[i] = _primitive([f1 * x - f2 * y for x, y in zip(rows[i], p)])
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    rows = rows[:r]
    return rows, pivots


def rank(matrix: Sequence[Sequence]) -> int:
    return len(row_reduce(matrix)[1])


def canonical_basis(vectors: Sequence[Sequence], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Canonical integer basis of the span of ``vectors``.

    The rows of the rational RREF, each scaled to a primitive integer vector
    with positive leading entry.  Two spanning sets of the same subspace give
    the same output.
    """
    if not vectors:
        return []
    rows, _ = row_reduce(vectors, ncols)
    return [tuple(r) for r in rows]


def nullspace(matrix: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Exact right nullspace ``{v : matrix @ v = 0}`` as a canonical basis."""
    rows, pivots = row_reduce(matrix, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            if row[f]:
                v[pc] = Fraction(-row[f], row[pc])
        basis.append(v)
    return canonical_basis(basis, ncols)


def in_span(vector: Sequence, basis: Sequence[Sequence]) -> bool:
    if not any(vector):
        return True
    if not basis:
        return False
    return rank(list(basis) + [vector]) == rank(basis)


def det(matrix: Sequence[Sequence]):
    """Exact determinant by Bareiss elimination; returns int or Fraction."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    scale = 1
    a = []
    for row in matrix:
        fr = [Fraction(x) for x in row]
        m = lcm(*(x.denominator for x in fr))
        scale *= m
        a.append([(x * m).numerator for x in fr])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    value = sign * a[n - 1][n - 1]
    if scale == 1:
        return value
    result = Fraction(value, scale)
    return result.numerator if result.denominator == 1 else result
