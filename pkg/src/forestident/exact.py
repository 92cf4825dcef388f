"""Exact integer/rational linear algebra: Bareiss determinants, rank, kernels.

Everything here is exact.  The modular routines work in GF(p) and are only used
where their answer is certified afterwards (see :mod:`forestident.idspace`).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

PRIME = (1 << 61) - 1  # Mersenne prime


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(row) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
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
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def submatrix(matrix: Sequence[Sequence[int]], rows_removed, cols_removed) -> list[list[int]]:
    """Delete 1-based rows/columns, keeping the rest in order."""
    rr = set(rows_removed)
    cc = set(cols_removed)
    return [
        [x for j, x in enumerate(row, start=1) if j not in cc]
        for i, row in enumerate(matrix, start=1)
        if i not in rr
    ]


def _integer_rows(matrix: Sequence[Sequence]) -> list[list[int]]:
    rows = []
    for row in matrix:
        den = 1
        for x in row:
            den = math.lcm(den, Fraction(x).denominator)
        rows.append([int(Fraction(x) * den) for x in row])
    return rows


def exact_rank(matrix: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free elimination (row denominators cleared first)."""
    a = _integer_rows(matrix)
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = None
        best = None
        for r in range(rank, len(a)):
            x = a[r][col]
            if x and (best is None or abs(x) < best):
                piv, best = r, abs(x)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        prow = a[rank]
        for r in range(rank + 1, len(a)):
            f = a[r][col]
            row = a[r]
            for j in range(col, ncols):
                row[j] = (row[j] * p - f * prow[j]) // prev
        prev = p
        rank += 1
        if rank == len(a):
            break
    return rank


def rref(matrix: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and its pivot columns."""
    a = [[Fraction(x) for x in row] for row in matrix]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = None
        best = None
        for i in range(r, len(a)):
            x = a[i][col]
            if x:
                size = abs(x.numerator * x.denominator)
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        prow = a[r]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def _kernel_from_rref(reduced, pivots, ncols, one, zero):
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def nullspace(matrix: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel over Q, one vector per free column."""
    if ncols is None:
        ncols = len(matrix[0])
    if not matrix:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    reduced, pivots = rref(matrix)
    return _kernel_from_rref(reduced, pivots, ncols, Fraction(1), Fraction(0))


class ModularEchelon:
    """Incremental row echelon basis over GF(p), fully reduced.

    Rows can be appended one at a time; ``rank`` never decreases, so the kernel
    dimension ``ncols - rank`` is non-increasing as rows arrive.
    """

    def __init__(self, ncols: int, p: int = PRIME):
        self.ncols = ncols
        self.p = p
        self.rows: dict[int, list[int]] = {}  # pivot column -> normalised row

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, row: Sequence[int]) -> bool:
        p = self.p
        r = [x % p for x in row]
        for pc, prow in self.rows.items():
            f = r[pc]
            if f:
                r = [(x - f * y) % p for x, y in zip(r, prow)]
        lead = next((j for j, x in enumerate(r) if x), None)
        if lead is None:
            return False
        inv = pow(r[lead], p - 2, p)
        r = [x * inv % p for x in r]
        for pc, prow in self.rows.items():
            f = prow[lead]
            if f:
                self.rows[pc] = [(x - f * y) % p for x, y in zip(prow, r)]
        self.rows[lead] = r
        return True

    def kernel(self) -> list[list[int]]:
        pivots = sorted(self.rows)
        reduced = [self.rows[pc] for pc in pivots]
        basis = _kernel_from_rref(reduced, pivots, self.ncols, 1, 0)
        return [[x % self.p for x in v] for v in basis]


def rational_reconstruct(a: int, p: int = PRIME) -> Fraction | None:
    """Recover n/d from a = n/d mod p with |n|, d <= sqrt(p/2), else None."""
    a %= p
    bound = math.isqrt(p // 2)
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)
