"""The space X_m of AB-pair combinations that vanish on every graph.

Two bounds on dim X_m are computed independently:

* lower: exact rank of the candidate basis L_{m,i}(j) - L_{m,m}(m-1), each
  element checked to vanish symbolically on the corpus graphs;
* upper: null space dimension of an evaluation matrix whose rows are the
  products A_i B_j at random integer edge weights on the corpus graphs.

The evaluation matrix is eliminated in GF(p), whose rank never exceeds the
rational rank, so ``ncols - rank_p`` is already an upper bound.  The modular
kernel is lifted to Q by rational reconstruction and every lifted vector is then
checked exactly (symbolically on K_m and K_{m+1}, by exact integer evaluation
at the sampled points elsewhere).  Once those checks pass the rational kernel is
exactly the lifted span.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import PRIME, ModularEchelon, exact_rank, nullspace, rational_reconstruct
from .forests import forests_by_partition
from .graphs import MarkedGraph, all_ab_pairs, complete_graph, enumerate_A, enumerate_B
from .identities import FormalSum, gen_identity, vanishes_on

WEIGHT_MAX = 1 << 31


class InsufficientSamples(ValueError):
    pass


class ABIndex:
    """Fixed coordinate order on V_m: A-major, both in enumeration order."""

    def __init__(self, m: int):
        self.m = m
        self.A = enumerate_A(m)
        self.B = enumerate_B(m)
        self.pairs = all_ab_pairs(m)
        self.position = {p: i for i, p in enumerate(self.pairs)}

    def __len__(self) -> int:
        return len(self.pairs)


def dim_V(m: int) -> int:
    return (m * (m - 1) // 2) * (2 ** (m - 1) - 1)


def as_vector(S: FormalSum, index: ABIndex) -> list[Fraction]:
    if S.m != index.m:
        raise ValueError("sum and index disagree on m")
    v = [Fraction(0)] * len(index)
    for pair, c in S.terms.items():
        v[index.position[pair]] = c
    return v


def from_vector(v: Sequence, index: ABIndex) -> FormalSum:
    return FormalSum(index.m, {p: x for p, x in zip(index.pairs, v) if x})


def candidate_basis(m: int) -> list[FormalSum]:
    """L_{m,i}(j) - L_{m,m}(m-1) for i in 1..m, j in 1..m-2."""
    ref = gen_identity(m, m, m - 1).sum
    return [gen_identity(m, i, j).sum - ref for i in range(1, m + 1) for j in range(1, m - 1)]


# ------------------------------------------------------------------ corpus


def random_connected_graph(rng: random.Random, n: int, m: int, max_edges: int) -> MarkedGraph:
    """Random spanning tree plus extra edges (parallel edges allowed); marked 1..m."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    pairs = []
    for i in range(1, n):
        pairs.append((order[rng.randrange(i)], order[i]))
    target = rng.randint(n - 1, max(n - 1, max_edges))
    while len(pairs) < target:
        u, v = rng.sample(range(1, n + 1), 2)
        pairs.append((min(u, v), max(u, v)))
    edges = tuple((u, v, i) for i, (u, v) in enumerate(pairs))
    return MarkedGraph(n, edges, tuple(range(1, m + 1)))


def default_corpus(m: int, seed: int, extra: int = 4) -> list[MarkedGraph]:
    """K_m, K_{m+1}, then ``extra`` seeded random connected graphs with m marked."""
    rng = random.Random(seed)
    corpus = [complete_graph(m), complete_graph(m + 1, range(1, m + 1))]
    for _ in range(extra):
        n = rng.choice([m + 1, m + 2])
        corpus.append(random_connected_graph(rng, n, m, max_edges=min(12, n * (n - 1) // 2)))
    return corpus


# ----------------------------------------------------------------- sampling


class _Evaluator:
    """Exact values of every A- and B-polynomial of one graph at integer weights."""

    def __init__(self, G: MarkedGraph, index: ABIndex):
        self.G = G
        m = G.m
        a_forests = forests_by_partition(G, m - 1)
        b_forests = forests_by_partition(G, 2)
        self.a = [a_forests.get(A, ()) for A in index.A]
        self.b = [b_forests.get(B, ()) for B in index.B]

    def values(self, w: Sequence[int]) -> tuple[list[int], list[int]]:
        total = 1
        for x in w:
            total *= x

        def value(forests):
            acc = 0
            for f in forests:
                d = 1
                for e in f:
                    d *= w[e]
                acc += total // d
            return acc

        return [value(fs) for fs in self.a], [value(fs) for fs in self.b]


@dataclass
class SampledKernel:
    m: int
    dim: int
    rows: int
    history: list[int]
    basis: list[list[Fraction]] = field(default_factory=list)
    certified: bool = False


def _sample_rows(G: MarkedGraph, index: ABIndex, points: int, rng: random.Random):
    ev = _Evaluator(G, index)
    for _ in range(points):
        w = [rng.randint(1, WEIGHT_MAX) for _ in range(G.num_edges)]
        a_vals, b_vals = ev.values(w)
        yield a_vals, b_vals


def sampled_kernel(
    m: int,
    corpus: Sequence[MarkedGraph],
    points_per_graph: int | None = None,
    seed: int = 0,
    certify: bool = True,
) -> SampledKernel:
    """Kernel of the sampled evaluation matrix over the corpus.

    ``history[g]`` is the kernel dimension after the first g+1 graphs.
    """
    index = ABIndex(m)
    ncols = len(index)
    if points_per_graph is None:
        points_per_graph = ncols
    for G in corpus:
        if G.m != m:
            raise ValueError(f"corpus graph has {G.m} marked vertices, expected {m}")
    total_rows = points_per_graph * len(corpus)
    if total_rows < ncols:
        raise InsufficientSamples(f"{total_rows} sample rows < dim V_{m} = {ncols}")

    rng = random.Random(seed)
    ech = ModularEchelon(ncols, PRIME)
    history = []
    samples: list[list[tuple[list[int], list[int]]]] = []
    na, nb = len(index.A), len(index.B)
    for G in corpus:
        pts = []
        for a_vals, b_vals in _sample_rows(G, index, points_per_graph, rng):
            pts.append((a_vals, b_vals))
            if ech.rank < ncols:
                ech.add([a_vals[i] * b_vals[j] for i in range(na) for j in range(nb)])
        samples.append(pts)
        history.append(ncols - ech.rank)

    result = SampledKernel(m, ncols - ech.rank, total_rows, history)
    if not certify:
        return result
    basis = _lift(ech.kernel())
    if basis is not None and _certify(basis, index, corpus, samples):
        result.basis = basis
        result.certified = True
        return result
    # Reconstruction failed or was unlucky: fall back to exact rational elimination.
    matrix = [
        [a[i] * b[j] for i in range(na) for j in range(nb)] for pts in samples for a, b in pts
    ]
    basis = nullspace(matrix, ncols)
    result.dim = len(basis)
    result.basis = basis
    result.certified = True
    return result


def _lift(kernel_mod_p: list[list[int]]) -> list[list[Fraction]] | None:
    out = []
    for v in kernel_mod_p:
        lifted = []
        for x in v:
            q = rational_reconstruct(x)
            if q is None:
                return None
            lifted.append(q)
        out.append(lifted)
    return out


def _certify(basis, index: ABIndex, corpus, samples) -> bool:
    m = index.m
    symbolic = {complete_graph(m), complete_graph(m + 1, range(1, m + 1))}
    na, nb = len(index.A), len(index.B)
    for v in basis:
        S = from_vector(v, index)
        for G, pts in zip(corpus, samples):
            if G in symbolic:
                if not vanishes_on(S, G):
                    return False
                continue
            den = math.lcm(*(x.denominator for x in v))
            coeffs = [int(x * den) for x in v]
            for a, b in pts:
                acc = 0
                for i in range(na):
                    row = 0
                    for j in range(nb):
                        c = coeffs[i * nb + j]
                        if c:
                            row += c * b[j]
                    acc += a[i] * row
                if acc:
                    return False
    return True


def sampled_kernel_dim(
    m: int, corpus: Sequence[MarkedGraph], points_per_graph: int | None = None, seed: int = 0
) -> int:
    return sampled_kernel(m, corpus, points_per_graph, seed, certify=False).dim


# ------------------------------------------------------------------ report


@dataclass
class DimensionReport:
    m: int
    expected: int
    lower: int
    upper: int
    history: list[int]
    corpus_size: int

    @property
    def passed(self) -> bool:
        return self.lower == self.upper == self.expected

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "expected": self.expected,
            "lower": self.lower,
            "upper": self.upper,
            "pass": self.passed,
        }


def dimension_report(
    m: int, seed: int = 7, max_extra: int = 8, corpus: Sequence[MarkedGraph] | None = None
) -> DimensionReport:
    """Lower and upper bounds on dim X_m.

    The corpus (by default K_m, K_{m+1} and ``max_extra`` random graphs) is fed
    in one graph at a time; the upper bound is read off once two consecutive
    extensions leave the sampled kernel dimension unchanged.
    """
    index = ABIndex(m)
    basis = candidate_basis(m)
    check_graphs = [complete_graph(m), complete_graph(m + 1, range(1, m + 1))]
    members = [S for S in basis if all(vanishes_on(S, G) for G in check_graphs)]
    lower = exact_rank([as_vector(S, index) for S in members])

    full = list(corpus) if corpus is not None else default_corpus(m, seed, extra=max_extra)
    kernel = sampled_kernel(m, full, seed=seed, certify=True)
    # Stabilisation: the value is reported once two consecutive extensions agree.
    history = kernel.history
    stable_at = None
    for g in range(2, len(history)):
        if history[g] == history[g - 1] == history[g - 2]:
            stable_at = g
            break
    if stable_at is None:
        raise InsufficientSamples(f"kernel dimension did not stabilise: {history}")
    upper = history[stable_at]
    if kernel.certified and upper != kernel.dim:
        upper = kernel.dim
    return DimensionReport(m, m * (m - 2), lower, upper, history, len(full))


def homogenized_differences(m: int) -> list[FormalSum]:
    """L_{m,c}(j) - L_{m,m}(m-1) for every (c, j) except the reference itself."""
    ref = gen_identity(m, m, m - 1).sum
    return [
        gen_identity(m, c, j).sum - ref
        for c in range(1, m + 1)
        for j in range(1, m)
        if (c, j) != (m, m - 1)
    ]


def in_span(vectors: Sequence[Sequence], basis: Sequence[Sequence]) -> bool:
    base = exact_rank(basis)
    return exact_rank(list(basis) + list(vectors)) == base


def homogenization_consistent(m: int, kernel: SampledKernel) -> bool:
    """Every homogenized difference, dependent ones included, lies in the sampled kernel."""
    index = ABIndex(m)
    return in_span([as_vector(S, index) for S in homogenized_differences(m)], kernel.basis)
