"""Symbolic Laplacian minors, the signed all-minors matrix-tree sum, and
integer-matrix checks of the column expansion and Dodgson-Muir identities.

Laplacian minors sum over forest-edge monomials ``prod_{e in F} a_e``; forest
polynomials use the complementary monomials.  :func:`forest_form` converts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .exact import bareiss_det, submatrix
from .forests import forests_by_partition
from .graphs import MarkedGraph
from .polyring import Poly, pack


class DimensionMismatch(ValueError):
    pass


class BadIndex(ValueError):
    pass


@dataclass(frozen=True)
class SymMatrix:
    dim: int
    entries: tuple[tuple[Poly, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def evaluate(self, assignment: Mapping[int, int]) -> list[list[int]]:
        return [[x.eval(assignment) for x in row] for row in self.entries]


@dataclass(frozen=True)
class MinorSpec:
    """Rows and columns to delete, 1-based."""

    rows: frozenset[int]
    cols: frozenset[int]

    @classmethod
    def of(cls, rows: Sequence[int], cols: Sequence[int]) -> MinorSpec:
        return cls(frozenset(rows), frozenset(cols))


def laplacian(G: MarkedGraph) -> SymMatrix:
    n = G.n
    acc = [[Poly.zero() for _ in range(n)] for _ in range(n)]
    for u, v, var in G.edges:
        x = Poly.var(var)
        i, j = u - 1, v - 1
        acc[i][i] = acc[i][i] + x
        acc[j][j] = acc[j][j] + x
        acc[i][j] = acc[i][j] - x
        acc[j][i] = acc[j][i] - x
    return SymMatrix(n, tuple(tuple(row) for row in acc))


def symbolic_det(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant by Laplace expansion along rows, memoised on used columns."""
    k = len(rows)
    if k == 0:
        return Poly.const(1)
    memo: dict[int, Poly] = {}
    full = (1 << k) - 1

    def expand(used: int) -> Poly:
        # ``used`` columns are taken by the rows above; this row is popcount(used).
        if used == full:
            return Poly.const(1)
        if used in memo:
            return memo[used]
        r = bin(used).count("1")
        acc = Poly.zero()
        sign = 1
        for c in range(k):
            if used >> c & 1:
                continue
            entry = rows[r][c]
            if entry:
                acc = acc + entry * expand(used | 1 << c) * sign
            sign = -sign
        memo[used] = acc
        return acc

    return expand(0)


def _check_spec(dim: int, spec: MinorSpec) -> None:
    if len(spec.rows) != len(spec.cols):
        raise DimensionMismatch(f"|R| = {len(spec.rows)} but |C| = {len(spec.cols)}")
    for x in spec.rows | spec.cols:
        if not 1 <= x <= dim:
            raise BadIndex(f"index {x} outside 1..{dim}")


def minor_det(M: SymMatrix, spec: MinorSpec) -> Poly:
    _check_spec(M.dim, spec)
    rows = [
        [M.entries[i - 1][j - 1] for j in range(1, M.dim + 1) if j not in spec.cols]
        for i in range(1, M.dim + 1)
        if i not in spec.rows
    ]
    return symbolic_det(rows)


def inversion_count(tau: Sequence[int]) -> int:
    """Sum over values v of the number of larger values standing left of v."""
    pos = {v: i for i, v in enumerate(tau)}
    return sum(1 for v in tau for w in tau if w > v and pos[w] < pos[v])


def permutation_sign(tau: Sequence[int]) -> int:
    return -1 if inversion_count(tau) % 2 else 1


def extension_sign_check(sigma_prime: Mapping[int, int], i: int, j: int) -> bool:
    """Does (-1)^(inv(sigma) - (i+j)) = (-1)^inv(sigma') hold for the extension sigma(i) = j?

    ``sigma_prime`` maps [k] \\ {i} bijectively onto [k] \\ {j}.
    """
    k = len(sigma_prime) + 1
    if set(sigma_prime) != set(range(1, k + 1)) - {i}:
        raise ValueError("sigma' must be defined on [k] minus {i}")
    if set(sigma_prime.values()) != set(range(1, k + 1)) - {j}:
        raise ValueError("sigma' must map onto [k] minus {j}")
    sigma = dict(sigma_prime)
    sigma[i] = j
    inv_full = inversion_count([sigma[x] for x in range(1, k + 1)])
    inv_part = inversion_count([sigma_prime[x] for x in sorted(sigma_prime)])
    return (inv_full - (i + j)) % 2 == inv_part % 2


def forest_sign(rows: Sequence[int], cols: Sequence[int], pairing: Mapping[int, int]) -> int:
    """Sign of a forest in det L_{R,C}.

    ``pairing`` sends each removed row to the removed column in its tree.  With
    R and C listed in increasing order this is a permutation; the sign is its
    parity times (-1)^(sum R + sum C).
    """
    rs = sorted(rows)
    cs = sorted(cols)
    rank = {c: t for t, c in enumerate(cs, start=1)}
    perm = [rank[pairing[r]] for r in rs]
    parity = (sum(rs) + sum(cs)) % 2
    return permutation_sign(perm) * (-1 if parity else 1)


def signed_forest_sum(G: MarkedGraph, spec: MinorSpec) -> Poly:
    """All-minors matrix-tree sum: forests with |R| trees, each holding exactly
    one removed row and one removed column, weighted by forest edges and sign."""
    _check_spec(G.n, spec)
    s = len(spec.rows)
    # Mark R and C vertices so forests_by_partition groups forests by which of
    # them share a tree; vertices in R & C are listed once.
    special = sorted(spec.rows | spec.cols)
    H = G.with_marked(special)
    unit = [pack({v: 1}) for v in range(G.num_edges)]
    terms: dict[int, int] = {}
    for part, forests in forests_by_partition(H, s).items():
        trees: dict[int, list[int]] = {}
        for v, label in zip(special, part):
            trees.setdefault(label, []).append(v)
        pairing = {}
        ok = True
        for members in trees.values():
            rs = [v for v in members if v in spec.rows]
            cs = [v for v in members if v in spec.cols]
            if len(rs) != 1 or len(cs) != 1:
                ok = False
                break
            pairing[rs[0]] = cs[0]
        if not ok:
            continue
        sign = forest_sign(spec.rows, spec.cols, pairing)
        for forest in forests:
            key = sum(unit[v] for v in forest)
            terms[key] = terms.get(key, 0) + sign
    return Poly(terms)


def forest_form(G: MarkedGraph, p: Poly) -> Poly:
    """Trade forest-edge monomials for non-forest-edge monomials."""
    return p.complement(range(G.num_edges))


# ------------------------------------------------------------ integer identities


def column_expansion_residual(M: Sequence[Sequence[int]], k: int, j: int) -> int:
    """det M det M_[k],[k] minus the column-j expansion sum; zero when the identity holds."""
    d = len(M)
    if not 1 <= j <= k:
        raise BadIndex(f"j = {j} outside 1..{k}")
    if not 1 <= k <= d:
        raise BadIndex(f"k = {k} outside 1..{d}")
    ks = set(range(1, k + 1))
    lhs = bareiss_det(M) * bareiss_det(submatrix(M, ks, ks))
    rhs = 0
    for i in range(1, k + 1):
        term = bareiss_det(submatrix(M, {i}, {j})) * bareiss_det(submatrix(M, ks - {i}, ks - {j}))
        rhs += term if (i + j) % 2 == 0 else -term
    return lhs - rhs


def dodgson_muir_residual(M: Sequence[Sequence[int]], k: int) -> int:
    d = len(M)
    if not 1 <= k <= d:
        raise BadIndex(f"k = {k} outside 1..{d}")
    ks = set(range(1, k + 1))
    lhs = bareiss_det(M) * bareiss_det(submatrix(M, ks, ks)) ** (k - 1)
    minors = {
        (i, c): bareiss_det(submatrix(M, ks - {i}, ks - {c})) for i in ks for c in ks
    }
    rhs = 0
    for sigma in itertools.permutations(range(1, k + 1)):
        prod = permutation_sign(sigma)
        for i, c in enumerate(sigma, start=1):
            prod *= minors[i, c]
            if not prod:
                break
        rhs += prod
    return lhs - rhs
