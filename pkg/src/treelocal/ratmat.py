"""Exact rational matrix rank via Gaussian elimination.

Small dense matrices only; everything is Fraction arithmetic, no floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _to_fractions(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def rank(rows: Sequence[Sequence]) -> int:
    return len(pivot_positions(rows))


def pivot_positions(rows: Sequence[Sequence]) -> list[tuple[int, int]]:
    """(row, column) pivot pairs of a row-echelon reduction, in original
    row indices; the pivot rows are independent and the square submatrix
    on (pivot rows) x (pivot columns) is invertible."""
    m = _to_fractions(rows)
    if not m:
        return []
    ncols = len(m[0])
    order = list(range(len(m)))
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        order[r], order[pivot] = order[pivot], order[r]
        pivots.append((order[r], c))
        inv = Fraction(1) / m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] * inv
                for j in range(c, ncols):
                    m[i][j] -= f * m[r][j]
        r += 1
        if r == len(m):
            break
    return pivots
