"""The acceptance suite, shared by ``forestident selftest`` and the test suite.

Each criterion is a function returning (passed, detail); :func:`run` times it
against its budget.  A criterion that runs over budget counts as failed.
"""

from __future__ import annotations

import contextlib
import io
import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import laplacian as lap
from .exact import exact_rank
from .forests import canonicalize_labels, expand_dash, forest_poly, forests_by_partition
from .graphs import (
    DASH,
    MarkedGraph,
    complete_graph,
    enumerate_A,
    enumerate_B,
    is_forbidden,
    parse_partition,
    restricted_growth_strings,
    triangle,
)
from .identities import (
    FormalSum,
    VY_SPECIALIZATIONS,
    all_nonforbidden_sum,
    block_sum,
    evaluate_sum,
    gen_identity,
    rhs_via_determinants,
    verify_identity,
    vy_from_column_identities,
    vy_identity,
    x_from_y,
)
from .idspace import ABIndex, as_vector, dimension_report
from .polyring import Poly

# The twelve four-vertex identities as (c, j) -> {A index: [B indices]}, in the
# A_1..A_6 / B_1..B_7 labelling.
M4_TABLE: dict[tuple[int, int], dict[int, list[int]]] = {
    (4, 1): {4: [1, 4, 5, 6], 1: [4, 6], 2: [4, 5]},
    (4, 2): {5: [1, 3, 5, 7], 1: [3, 7], 3: [3, 5]},
    (4, 3): {6: [1, 2, 6, 7], 2: [2, 7], 3: [2, 6]},
    (3, 1): {2: [2, 4, 5, 7], 1: [4, 7], 4: [4, 5]},
    (3, 2): {3: [2, 3, 5, 6], 1: [3, 6], 5: [3, 5]},
    (3, 3): {6: [1, 2, 6, 7], 4: [1, 6], 5: [1, 7]},
    (2, 1): {1: [3, 4, 6, 7], 2: [4, 7], 4: [4, 6]},
    (2, 2): {3: [2, 3, 5, 6], 2: [2, 5], 6: [2, 6]},
    (2, 3): {5: [1, 3, 5, 7], 4: [1, 5], 6: [1, 7]},
    (1, 1): {1: [3, 4, 6, 7], 3: [3, 6], 5: [3, 7]},
    (1, 2): {2: [2, 4, 5, 7], 3: [2, 5], 6: [2, 7]},
    (1, 3): {4: [1, 4, 5, 6], 5: [1, 5], 6: [1, 6]},
}

# Change of variables from the eight basis differences to the eight
# differences used by vy_from_column_identities (reference form).
CHANGE_OF_VARIABLES = [
    [1, 0, 0, 0, -1, 0, 0, 0],
    [1, 0, -1, 0, 0, 0, 0, 0],
    [0, 1, 0, -1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, -1, 0, 0],
    [0, 1, 0, 0, 0, 0, -1, 0],
    [0, 0, -1, -1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -1],
    [0, 0, -1, -1, 0, 0, 1, 1],
]

# The same change of variables solved for exactly.  Row 4 differs from the
# reference form: L_{4,4}(3) - L_{4,2}(2) is minus the sixth basis difference
# alone, with no L_{4,3}(1) component.
SOLVED_CHANGE_OF_VARIABLES = [row[:] for row in CHANGE_OF_VARIABLES]
SOLVED_CHANGE_OF_VARIABLES[3] = [0, 0, 0, 0, 0, -1, 0, 0]


def m4_table_sum(c: int, j: int) -> FormalSum:
    A = enumerate_A(4)
    B = enumerate_B(4)
    pairs = [(A[a - 1], B[b - 1]) for a, bs in M4_TABLE[c, j].items() for b in bs]
    return FormalSum(4, {p: 1 for p in pairs})


@dataclass
class CriterionResult:
    number: int
    key: str
    passed: bool
    seconds: float
    limit: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.number} {self.key}: {self.detail} "
            f"({self.seconds:.2f}s, limit {self.limit:g}s)"
        )


# ---------------------------------------------------------------- criteria


def check_triangle() -> tuple[bool, str]:
    G = triangle()
    names = G.var_ids()
    expected = {
        "(1,2,2)": "b*c",
        "(-,1,2)": "a*b + a*c",
        "(1,1,1)": "a + b + c",
        "(1,2,3)": "a*b*c",
    }
    bad = [
        p for p, text in expected.items()
        if forest_poly(G, parse_partition(p)) != Poly.parse(text, names)
    ]
    return not bad, f"{len(expected) - len(bad)}/{len(expected)} triangle polynomials" + (
        f", wrong: {bad}" if bad else ""
    )


def _random_int_matrix(rng: random.Random, d: int) -> list[list[int]]:
    return [[rng.randint(-9, 9) for _ in range(d)] for _ in range(d)]


def check_determinant_identities(trials: int = 100, seed: int = 2) -> tuple[bool, str]:
    rng = random.Random(seed)
    checked = 0
    bad = []
    for d in range(4, 8):
        for k in range(2, min(5, d) + 1):
            for _ in range(trials):
                M = _random_int_matrix(rng, d)
                for j in range(1, k + 1):
                    checked += 1
                    if lap.column_expansion_residual(M, k, j):
                        bad.append(("colexp", d, k, j))
                if k <= 4:
                    checked += 1
                    if lap.dodgson_muir_residual(M, k):
                        bad.append(("muir", d, k))
    return not bad, f"{checked} residuals, {len(bad)} nonzero"


def mtt_corpus(seed: int = 3, size: int = 36) -> list[MarkedGraph]:
    """Seeded connected multigraphs with at most 5 vertices and 8 edges."""
    rng = random.Random(seed)
    out = [triangle(), complete_graph(4)]
    while len(out) < size:
        n = rng.randint(2, 5)
        order = list(range(1, n + 1))
        rng.shuffle(order)
        pairs = [(order[rng.randrange(i)], order[i]) for i in range(1, n)]
        for _ in range(rng.randint(0, 8 - len(pairs))):
            u, v = rng.sample(range(1, n + 1), 2)
            pairs.append((u, v))
        edges = tuple((min(u, v), max(u, v), i) for i, (u, v) in enumerate(pairs))
        out.append(MarkedGraph(n, edges, tuple(range(1, n + 1))))
    return out


def minor_specs(n: int, max_size: int = 3):
    for s in range(1, min(max_size, n) + 1):
        for R in itertools.combinations(range(1, n + 1), s):
            for C in itertools.combinations(range(1, n + 1), s):
                yield lap.MinorSpec.of(R, C)


def check_matrix_tree() -> tuple[bool, str]:
    bad = []
    checked = 0
    for G in mtt_corpus():
        L = lap.laplacian(G)
        for spec in minor_specs(G.n):
            checked += 1
            if lap.minor_det(L, spec) != lap.signed_forest_sum(G, spec):
                bad.append((G, spec))
    # det L_{13,12} on the triangle is a single negative forest.
    T = triangle()
    tri = lap.signed_forest_sum(T, lap.MinorSpec.of([1, 3], [1, 2]))
    tri_ok = tri == -Poly.var(0) and tri == lap.minor_det(lap.laplacian(T), lap.MinorSpec.of([1, 3], [1, 2]))
    # det L_{24,14} on K_4 is minus the forest polynomial (1,1,-,2).
    K4 = complete_graph(4)
    d = lap.minor_det(lap.laplacian(K4), lap.MinorSpec.of([2, 4], [1, 4]))
    k4_ok = lap.forest_form(K4, d) == -forest_poly(K4, parse_partition("(1,1,-,2)"))
    ok = not bad and tri_ok and k4_ok
    return ok, (
        f"{checked} minors on {len(mtt_corpus())} graphs, {len(bad)} disagree; "
        f"L13,12 {'ok' if tri_ok else 'wrong'}, L24,14 {'ok' if k4_ok else 'wrong'}"
    )


def check_m4_suite() -> tuple[bool, str]:
    K4 = complete_graph(4)
    K5 = complete_graph(5, [1, 2, 3, 4])
    problems = []
    for c in range(1, 5):
        for j in range(1, 4):
            S = gen_identity(4, c, j).sum
            if len(S) != 8 or any(x != 1 for x in S.terms.values()):
                problems.append((c, j, "shape"))
            if S != m4_table_sum(c, j):
                problems.append((c, j, "table"))
            for G in (K4, K5):
                if not verify_identity(S, G):
                    problems.append((c, j, "verify"))
                total, _ = evaluate_sum(S, G)
                for r in range(1, 5):
                    if rhs_via_determinants(G, r, c, j) != total:
                        problems.append((c, j, f"row {r}"))
    return not problems, f"12 identities, {len(problems)} problems" + (
        f": {problems[:4]}" if problems else ""
    )


def check_blocks() -> tuple[bool, str]:
    bad = []
    for m in range(3, 7):
        J = all_nonforbidden_sum(m)
        for c in range(1, m + 1):
            if block_sum(m, c) != J:
                bad.append((m, c))
    n4 = len(all_nonforbidden_sum(4))
    ok = not bad and n4 == 24
    return ok, f"m=3..6 blocks agree: {not bad}; m=4 common sum has {n4} terms"


def _random_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-20, 20), rng.randint(1, 9))


def check_vy(trials: int = 20, seed: int = 5) -> tuple[bool, str]:
    rng = random.Random(seed)
    K4 = complete_graph(4)
    K5 = complete_graph(5, [1, 2, 3, 4])
    bad_verify = 0
    for _ in range(trials):
        x = [_random_fraction(rng) for _ in range(8)]
        S = vy_identity(x)
        if not (verify_identity(S, K4) and verify_identity(S, K5)):
            bad_verify += 1
    bad_spec = [cj for cj, x in VY_SPECIALIZATIONS.items() if vy_identity(x) != gen_identity(4, *cj).sum]
    bad_y = 0
    for _ in range(trials):
        y = [_random_fraction(rng) for _ in range(8)]
        if vy_from_column_identities(y) != vy_identity(x_from_y(y)):
            bad_y += 1
    ok = not bad_verify and not bad_spec and len(VY_SPECIALIZATIONS) == 12 and not bad_y
    return ok, (
        f"{trials - bad_verify}/{trials} random x verify, "
        f"{12 - len(bad_spec)}/12 specializations, {trials - bad_y}/{trials} y-forms agree"
    )


def check_dimension(seed: int = 7) -> tuple[bool, str]:
    parts = []
    ok = True
    for m in (3, 4, 5):
        rep = dimension_report(m, seed=seed)
        ok &= rep.passed
        parts.append(f"m={m} ({rep.lower},{rep.upper})")
    rank = exact_rank(CHANGE_OF_VARIABLES)
    solved_rank = exact_rank(SOLVED_CHANGE_OF_VARIABLES)
    relation_ok = change_of_variables_holds(SOLVED_CHANGE_OF_VARIABLES)
    ok &= rank == 8 and solved_rank == 8 and relation_ok
    parts.append(
        f"change of variables rank {rank} (solved form rank {solved_rank}, "
        f"relation {'holds' if relation_ok else 'fails'})"
    )
    return ok, ", ".join(parts)


def change_of_variables_holds(matrix) -> bool:
    """Does row k of ``matrix`` write the k-th y-difference in the basis differences?"""
    # Row k of the matrix expresses the k-th difference of the column-identity
    # form in the basis L_{4,4}(1), L_{4,4}(2), L_{4,3}(1), L_{4,3}(2), L_{4,2}(1),
    # L_{4,2}(2), L_{4,1}(1), L_{4,1}(2), each minus L_{4,4}(3).
    index = ABIndex(4)
    order = [(4, 1), (4, 2), (3, 1), (3, 2), (2, 1), (2, 2), (1, 1), (1, 2)]
    ref = gen_identity(4, 4, 3).sum
    vecs = [as_vector(gen_identity(4, c, j).sum - ref, index) for c, j in order]
    zero = vy_from_column_identities([0] * 8)
    for k, row in enumerate(matrix):
        e = [0] * 8
        e[k] = 1
        target = as_vector(vy_from_column_identities(e) - zero, index)
        combo = [sum(r * v[i] for r, v in zip(row, vecs)) for i in range(len(index))]
        if combo != target:
            return False
    return True


def check_properties() -> tuple[bool, str]:
    failures = []
    graphs = [triangle(), complete_graph(4), complete_graph(5, [1, 2, 3, 4])] + mtt_corpus(size=12)[2:]
    # Multilinearity of every forest polynomial.
    for G in graphs:
        for P in restricted_growth_strings(G.m):
            if forest_poly(G, P).max_exponent > 1:
                failures.append(("multilinear", G.n, P))
    # DASH entries: the expansion sum equals the polynomial with those vertices unmarked.
    for G in graphs:
        m = G.m
        for P in restricted_growth_strings(m):
            for mask in range(1, 1 << m):
                dashed = [i for i in range(m) if mask >> i & 1]
                if len(dashed) == m:
                    continue
                Q = tuple(DASH if i in dashed else x for i, x in enumerate(P))
                kept = [i for i in range(m) if i not in dashed]
                H = G.with_marked([G.marked[i] for i in kept])
                restricted = canonicalize_labels([P[i] for i in kept])
                lhs = forest_poly(G, Q)
                rhs = forest_poly(H, restricted)
                if lhs != rhs or lhs != sum((forest_poly(G, q) for q in expand_dash(Q)), Poly.zero()):
                    failures.append(("dash", G.n, Q))
    # Permissible, unit-coefficient terms in every generated identity.
    for m in range(3, 7):
        for c in range(1, m + 1):
            for j in range(1, m):
                S = gen_identity(m, c, j).sum
                if any(is_forbidden(p) for p in S.terms) or any(x != 1 for x in S.terms.values()):
                    failures.append(("permissible", m, c, j))
    # Inversion parity under extending a bijection, exhaustively for k <= 5.
    for k in range(1, 6):
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                dom = [x for x in range(1, k + 1) if x != i]
                cod = [x for x in range(1, k + 1) if x != j]
                for img in itertools.permutations(cod):
                    if not lap.extension_sign_check(dict(zip(dom, img)), i, j):
                        failures.append(("invsigns", k, i, j))
    # Byte-identical CLI output under a fixed seed.
    if not _cli_deterministic():
        failures.append(("cli-determinism",))
    return not failures, f"{len(failures)} property failures" + (f": {failures[:3]}" if failures else "")


def _cli_deterministic() -> bool:
    from .cli import main

    commands = [
        ["dim", "--m", "4", "--seed", "11"],
        ["vy-check", "--trials", "3", "--seed", "9"],
        ["colexp-check", "--k", "3", "--trials", "5", "--seed", "4"],
        ["gen-identity", "--m", "4", "--c", "2", "--j", "3"],
    ]
    for argv in commands:
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                code = main(argv)
            outs.append((code, buf.getvalue()))
        if outs[0] != outs[1] or outs[0][0] != 0:
            return False
    return True


@dataclass(frozen=True)
class Criterion:
    number: int
    key: str
    limit: float
    check: Callable[[], tuple[bool, str]]


CRITERIA = [
    Criterion(1, "triangle", 1, check_triangle),
    Criterion(2, "determinants", 10, check_determinant_identities),
    Criterion(3, "mtt", 60, check_matrix_tree),
    Criterion(4, "m4", 60, check_m4_suite),
    Criterion(5, "blocks", 10, check_blocks),
    Criterion(6, "vy", 120, check_vy),
    Criterion(7, "dimension", 180, check_dimension),
    Criterion(8, "properties", 60, check_properties),
]


def _clear_caches() -> None:
    # Timings should not depend on what ran earlier in the process.
    forests_by_partition.cache_clear()
    forest_poly.cache_clear()


def run_criterion(c: Criterion) -> CriterionResult:
    _clear_caches()
    start = time.perf_counter()
    try:
        passed, detail = c.check()
    except Exception as exc:  # a crash is a failure, reported with its cause
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if elapsed >= c.limit:
        passed = False
        detail += " [over time budget]"
    return CriterionResult(c.number, c.key, passed, elapsed, c.limit, detail)


def select(only: list[str] | None = None) -> list[Criterion]:
    if not only:
        return list(CRITERIA)
    wanted = set(only)
    unknown = wanted - {c.key for c in CRITERIA} - {str(c.number) for c in CRITERIA}
    if unknown:
        raise KeyError(f"unknown criteria: {sorted(unknown)}")
    return [c for c in CRITERIA if c.key in wanted or str(c.number) in wanted]


def run(only: list[str] | None = None) -> list[CriterionResult]:
    return [run_criterion(c) for c in select(only)]
