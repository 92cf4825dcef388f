"""Quadratic spanning forest identities built from column expansion.

Identities are generated combinatorially from permissible AB pairs and checked
two independent ways: against forest polynomials, and against the symbolic
Laplacian determinants they come from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .forests import all_distinct, all_ones, forest_poly
from .graphs import (
    ABPair,
    MarkedGraph,
    a_pair,
    all_ab_pairs,
    enumerate_A,
    enumerate_B,
    format_partition,
    is_forbidden,
    parse_partition,
    validate_ab,
)
from .laplacian import MinorSpec, forest_form, laplacian, minor_det
from .polyring import Poly, poly_sum


class FormalSum:
    """Rational linear combination of AB pairs over a fixed m."""

    def __init__(self, m: int, terms: Mapping[ABPair, Fraction | int] | None = None):
        self.m = m
        self.terms: dict[ABPair, Fraction] = {}
        for pair, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                pair = ABPair(*pair)
                if len(pair.A) != m:
                    raise ValueError(f"pair {pair} is not over m={m}")
                self.terms[pair] = c

    @classmethod
    def of_pairs(cls, m: int, pairs: Iterable[ABPair]) -> FormalSum:
        acc: dict[ABPair, Fraction] = {}
        for p in pairs:
            acc[p] = acc.get(p, Fraction(0)) + 1
        return cls(m, acc)

    def __add__(self, other: FormalSum) -> FormalSum:
        self._same_m(other)
        acc = dict(self.terms)
        for p, c in other.terms.items():
            acc[p] = acc.get(p, Fraction(0)) + c
        return FormalSum(self.m, acc)

    def __neg__(self) -> FormalSum:
        return FormalSum(self.m, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: FormalSum) -> FormalSum:
        return self + (-other)

    def __mul__(self, scalar) -> FormalSum:
        s = Fraction(scalar)
        return FormalSum(self.m, {p: c * s for p, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"FormalSum(m={self.m}, {len(self.terms)} terms)"

    def _same_m(self, other: FormalSum) -> None:
        if self.m != other.m:
            raise ValueError(f"mixing m={self.m} and m={other.m}")

    def sorted_terms(self) -> list[tuple[ABPair, Fraction]]:
        order = {p: i for i, p in enumerate(all_ab_pairs(self.m))}
        return sorted(self.terms.items(), key=lambda t: order[t[0]])

    def to_json_terms(self) -> list[dict]:
        return [
            {"A": format_partition(p.A), "B": format_partition(p.B), "coeff": str(c)}
            for p, c in self.sorted_terms()
        ]

    @classmethod
    def from_json_terms(cls, m: int, terms: Sequence[Mapping]) -> FormalSum:
        acc: dict[ABPair, Fraction] = {}
        for t in terms:
            pair = ABPair(parse_partition(t["A"]), parse_partition(t["B"]))
            validate_ab(pair)
            if len(pair.A) != m:
                raise ValueError(f"term {t} is not over m={m}")
            acc[pair] = acc.get(pair, Fraction(0)) + Fraction(str(t.get("coeff", "1")))
        return cls(m, acc)


@dataclass(frozen=True)
class IdentityRecord:
    """The identity L_{m,c}(j): c is the removed column, j the expansion index."""

    m: int
    c: int
    j: int
    sum: FormalSum

    def to_dict(self) -> dict:
        return {"m": self.m, "c": self.c, "j": self.j, "terms": self.sum.to_json_terms()}


def expansion_vertex(c: int, j: int) -> int:
    """Marked vertex addressed by expansion index j once column c is removed."""
    return j if j < c else j + 1


def expansion_index(c: int, vertex: int) -> int:
    if vertex == c:
        raise ValueError("the removed column has no expansion index")
    return vertex if vertex < c else vertex - 1


def permissible_pairs(m: int, c: int, j: int) -> list[ABPair]:
    """AB pairs with j paired to some l in A, and B separating j from both c and l.

    Here ``j`` is a marked vertex (not an expansion index).
    """
    if m < 3:
        raise ValueError("need m >= 3")
    if not (1 <= c <= m and 1 <= j <= m) or c == j:
        raise ValueError(f"need distinct c, j in 1..{m}")
    out = []
    for A in enumerate_A(m):
        lo, hi = a_pair(A)
        if j not in (lo, hi):
            continue
        ell = hi if lo == j else lo
        for B in enumerate_B(m):
            if B[j - 1] != B[c - 1] and B[j - 1] != B[ell - 1]:
                out.append(ABPair(A, B))
    return out


def gen_identity(m: int, c: int, j: int) -> IdentityRecord:
    """Right-hand side of L_{m,c}(j): one copy of every permissible pair."""
    if not 1 <= j <= m - 1:
        raise ValueError(f"expansion index j must be in 1..{m - 1}")
    pairs = permissible_pairs(m, c, expansion_vertex(c, j))
    return IdentityRecord(m, c, j, FormalSum.of_pairs(m, pairs))


def all_identities(m: int) -> list[IdentityRecord]:
    return [gen_identity(m, c, j) for c in range(1, m + 1) for j in range(1, m)]


# ------------------------------------------------------------------ evaluation


def _lhs(G: MarkedGraph) -> Poly:
    return forest_poly(G, all_ones(G.m)) * forest_poly(G, all_distinct(G.m))


def ab_product(G: MarkedGraph, pair: ABPair) -> Poly:
    return forest_poly(G, pair.A) * forest_poly(G, pair.B)


def evaluate_sum(S: FormalSum, G: MarkedGraph) -> tuple[Poly, int]:
    """Return (scale * sum coeff*A*B, scale) with scale clearing denominators."""
    if G.m != S.m:
        raise ValueError(f"graph has {G.m} marked vertices, sum is over m={S.m}")
    scale = 1
    for c in S.terms.values():
        scale = math.lcm(scale, c.denominator)
    total = poly_sum(
        ab_product(G, pair) * int(c * scale) for pair, c in S.sorted_terms()
    )
    return total, scale


def verify_identity(S: FormalSum, G: MarkedGraph) -> bool:
    """Check (1,...,1)(1,2,...,m) = S as polynomials on G."""
    total, scale = evaluate_sum(S, G)
    return total == _lhs(G) * scale


def vanishes_on(S: FormalSum, G: MarkedGraph) -> bool:
    total, _ = evaluate_sum(S, G)
    return not total


def rhs_via_determinants(G: MarkedGraph, r: int, c: int, j: int) -> Poly:
    """L_{r,c}(j) from the column-j expansion of M = L_{r,c}, in forest form.

    Marked vertices are moved to indices 1..m first.  The result is multiplied
    by (-1)^(r+c), the sign relating det L_{r,c} to the spanning-tree
    polynomial, so that it always equals (1,...,1)(1,2,...,m).
    """
    H = G.relabeled()
    m = H.m
    k = m - 1
    if not (1 <= r <= m and 1 <= c <= m):
        raise ValueError(f"r, c must be marked vertices 1..{m}")
    if not 1 <= j <= k:
        raise ValueError(f"expansion index j must be in 1..{k}")
    L = laplacian(H)
    marked = set(range(1, m + 1))

    def row_of(i: int) -> int:  # row i of M as a row of L
        return i if i < r else i + 1

    col = j if j < c else j + 1
    total = Poly.zero()
    for i in range(1, k + 1):
        ri = row_of(i)
        b_det = minor_det(L, MinorSpec.of([ri, r], [col, c]))
        if not b_det:
            continue
        a_det = minor_det(L, MinorSpec.of(marked - {ri}, marked - {col}))
        term = forest_form(H, a_det) * forest_form(H, b_det)
        total = total + (term if (i + j) % 2 == 0 else -term)
    return total if (r + c) % 2 == 0 else -total


# ------------------------------------------------------------------ blocks


def block_sum(m: int, c: int) -> FormalSum:
    total = FormalSum(m)
    for j in range(1, m):
        total = total + gen_identity(m, c, j).sum
    return total


def all_nonforbidden_sum(m: int) -> FormalSum:
    return FormalSum.of_pairs(m, [p for p in all_ab_pairs(m) if not is_forbidden(p)])


# ------------------------------------------------------------- four vertices

# Coefficients of the general four-vertex identity, keyed by (A index, B index)
# in the A_1..A_6 / B_1..B_7 labelling; each value is (constant, {x index: coeff}).
_VY_TABLE: dict[tuple[int, int], tuple[int, dict[int, int]]] = {
    (4, 1): (1, {1: -1, 2: -1}),
    (2, 4): (0, {7: 1}),
    (5, 1): (1, {3: -1, 2: -1}),
    (6, 1): (1, {1: -1, 4: -1}),
    (2, 2): (0, {2: 1}),
    (3, 2): (0, {3: 1, 2: 1, 5: -1}),
    (6, 2): (1, {1: -1, 6: -1}),
    (1, 3): (0, {1: 1}),
    (3, 3): (0, {1: 1, 7: -1, 4: 1}),
    (5, 3): (0, {1: 1, 8: -1, 6: 1}),
    (1, 4): (0, {5: 1}),
    (3, 5): (0, {1: 1, 5: -1, 4: 1}),
    (5, 5): (0, {1: 1, 5: -1, 6: 1}),
    (1, 6): (0, {3: 1}),
    (3, 6): (0, {3: 1, 2: 1, 7: -1}),
    (4, 6): (1, {1: -1, 2: -1, 8: 1, 6: -1}),
    (2, 7): (0, {2: 1, 7: 1, 4: -1}),
    (6, 6): (1, {1: -1, 7: -1, 8: 1, 6: -1}),
    (1, 7): (0, {1: 1, 5: 1, 3: -1}),
    (5, 7): (1, {5: 1, 3: -1, 2: -1, 8: -1}),
    (6, 7): (1, {1: -1, 7: 1, 4: -1, 8: -1}),
    (4, 4): (0, {8: 1}),
    (2, 5): (0, {4: 1}),
    (4, 5): (0, {6: 1}),
}

# x-vectors at which the general identity specialises to each L_{4,c}(j).
VY_SPECIALIZATIONS: dict[tuple[int, int], tuple[int, ...]] = {
    (4, 1): (0, 0, 1, 1, 1, 1, 1, 1),
    (4, 2): (1, 0, 0, 0, 0, 0, 0, 0),
    (4, 3): (0, 1, 0, 0, 0, 0, 0, 0),
    (3, 1): (0, 1, 0, 1, 1, 1, 1, 1),
    (3, 2): (1, 0, 1, 0, 0, 0, 0, 0),
    (3, 3): (0, 0, 0, 0, 0, 0, 0, 0),
    (2, 1): (1, 0, 1, 0, 1, 0, 1, 1),
    (2, 2): (0, 1, 0, 1, 0, 0, 0, 0),
    (2, 3): (0, 0, 0, 0, 0, 1, 0, 0),
    (1, 1): (1, 0, 1, 0, 1, 0, 0, 0),
    (1, 2): (0, 1, 0, 1, 0, 0, 1, 0),
    (1, 3): (0, 0, 0, 0, 0, 1, 0, 1),
}


def _check8(v: Sequence) -> list[Fraction]:
    if len(v) != 8:
        raise ValueError("expected eight parameters")
    return [Fraction(x) for x in v]


def vy_identity(x: Sequence) -> FormalSum:
    """The eight-parameter family of four-vertex identities."""
    xs = _check8(x)
    A = enumerate_A(4)
    B = enumerate_B(4)
    terms = {}
    for (ai, bj), (const, lin) in _VY_TABLE.items():
        terms[ABPair(A[ai - 1], B[bj - 1])] = const + sum(c * xs[i - 1] for i, c in lin.items())
    return FormalSum(4, terms)


def y_from_x(x: Sequence) -> list[Fraction]:
    x1, x2, x3, x4, x5, x6, x7, x8 = _check8(x)
    return [
        1 - x1,
        1 - x2,
        1 - x3 - x2 + x5,
        1 - x4 - x1 + x7,
        1 - x5,
        1 - x6 - x1 + x8,
        1 - x7,
        1 - x8,
    ]


def x_from_y(y: Sequence) -> list[Fraction]:
    y1, y2, y3, y4, y5, y6, y7, y8 = _check8(y)
    x1, x2, x5, x7, x8 = 1 - y1, 1 - y2, 1 - y5, 1 - y7, 1 - y8
    x3 = 1 - y3 - x2 + x5
    x4 = 1 - y4 - x1 + x7
    x6 = 1 - y6 - x1 + x8
    return [x1, x2, x3, x4, x5, x6, x7, x8]


def vy_from_column_identities(y: Sequence) -> FormalSum:
    """The four-vertex family written as a combination of the L_{4,c}(j)."""
    ys = _check8(y)

    def L(c, j):
        return gen_identity(4, c, j).sum

    total = L(3, 1) + L(3, 2) - L(3, 3)
    diffs = [
        L(4, 1) - L(2, 1),
        L(4, 1) - L(3, 1),
        L(4, 2) - L(3, 2),
        L(4, 3) - L(2, 2),
        L(4, 2) - L(1, 1),
        L(3, 3) - L(2, 3),
        L(4, 3) - L(1, 2),
        L(3, 3) - L(1, 3),
    ]
    for coeff, d in zip(ys, diffs):
        total = total + d * coeff
    return total
