"""Exact dense linear algebra over Q.

Elimination runs on integer rows (fraction-free, content removed after each
step) so intermediate growth stays bounded; results are returned as reduced
row-echelon data over ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for a in row:
        den = lcm(den, Fraction(a).denominator)
    return [int(Fraction(a) * den) for a in row]


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for a in row:
        g = gcd(g, a)
    if g > 1:
        return [a // g for a in row]
    return row


def rref(matrix: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row-echelon form.

    Returns ``(rows, pivots)`` where ``rows`` are the nonzero RREF rows as
    lists of ``Fraction`` and ``pivots`` their pivot columns. Columns are
    scanned left to right, so the result is deterministic.
    """
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    rows = [_primitive(_integer_row(r)) for r in matrix if any(r)]
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        sel = None
        for r in range(top, len(rows)):
            if rows[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        rows[top], rows[sel] = rows[sel], rows[top]
        p = rows[top]
        a = p[col]
        for r in range(len(rows)):
            if r == top or rows[r][col] == 0:
                continue
            b = rows[r][col]
            rows[r] = _primitive([a * x - b * y for x, y in zip(rows[r], p)])
        pivots.append(col)
        top += 1
        if top == len(rows):
            break
    out = []
    for r, col in zip(rows[:top], pivots):
        piv = r[col]
        out.append([Fraction(x, piv) for x in r])
    return out, pivots


def nullspace(matrix: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : M v = 0}``, one vector per free column, in column order.

    Each basis vector has a 1 in its free column and 0 in the other free
    columns, which makes the basis canonical.
    """
    rows, pivots = rref(matrix, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, col in zip(rows, pivots):
            v[col] = -r[free]
        basis.append(v)
    return basis


def rank(matrix: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    return len(rref(matrix, ncols)[1])


def inverse(matrix: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Inverse of a square matrix; raises ``ValueError`` if singular."""
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    rows, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ValueError("singular matrix")
    return [row[n:] for row in rows[:n]]
