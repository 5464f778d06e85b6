"""Exact determinants of small square matrices of Polys."""

from __future__ import annotations

from typing import Sequence

from .errors import InternalConsistencyError
from .poly import Poly


def bareiss_determinant(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Fraction-free Gaussian elimination (Bareiss) over the polynomial ring.

    Every intermediate division is exact; a failed division means the
    arithmetic is broken and raises InternalConsistencyError.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    ring = rows[0][0].ring
    m = [list(r) for r in rows]
    sign = 1
    prev = Poly.const(ring, 1)
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Poly.zero(ring)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                q = num.exact_quotient(prev)
                if q is None:
                    raise InternalConsistencyError("inexact Bareiss division")
                m[i][j] = q
            m[i][k] = Poly.zero(ring)
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def cofactor_determinant(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Laplace expansion along the first row. Division-free, so it also works on truncated series."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n == 1:
        return rows[0][0]
    total = Poly.zero(rows[0][0].ring)
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1 :] for r in (list(row) for row in rows[1:])]
        term = a * cofactor_determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def determinant(rows: Sequence[Sequence[Poly]]) -> Poly:
    ring = rows[0][0].ring
    if ring.is_series:
        return cofactor_determinant(rows)
    return bareiss_determinant(rows)
