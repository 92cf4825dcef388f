import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from forestident.acceptance import M4_TABLE, m4_table_sum
from forestident.forests import all_distinct, all_ones, forest_poly
from forestident.graphs import (
    ABPair,
    MarkedGraph,
    complete_graph,
    enumerate_A,
    enumerate_B,
    is_forbidden,
    triangle,
)
from forestident.identities import (
    VY_SPECIALIZATIONS,
    FormalSum,
    all_identities,
    all_nonforbidden_sum,
    block_sum,
    evaluate_sum,
    expansion_index,
    expansion_vertex,
    gen_identity,
    permissible_pairs,
    rhs_via_determinants,
    verify_identity,
    vy_from_column_identities,
    vy_identity,
    x_from_y,
    y_from_x,
)
from forestident.polyring import Poly

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
eight = st.lists(fractions, min_size=8, max_size=8)


@pytest.mark.parametrize("m", range(3, 7))
def test_identity_shape(m):
    for rec in all_identities(m):
        S = rec.sum
        assert len(S) == m * 2 ** (m - 3)
        assert all(c == 1 for c in S.terms.values())
        assert not any(is_forbidden(p) for p in S.terms)


def test_five_vertex_count_is_twenty():
    assert len(gen_identity(5, 5, 1).sum) == 20


@pytest.mark.parametrize("cj", sorted(M4_TABLE))
def test_four_vertex_identities_match_table(cj):
    assert gen_identity(4, *cj).sum == m4_table_sum(*cj)


def test_three_vertex_identities_as_a_set():
    # The six three-vertex identities, with A_1 = B_1 = (1,2,2), A_2 = B_2 = (1,2,1),
    # A_3 = B_3 = (1,1,2); order within a pair matters.
    P = {1: (1, 2, 2), 2: (1, 2, 1), 3: (1, 1, 2)}
    displayed = [
        [(1, 3), (2, 3), (2, 1)],
        [(3, 1), (3, 2), (1, 2)],
        [(1, 3), (1, 2), (2, 3)],
        [(3, 1), (2, 1), (3, 2)],
        [(3, 2), (1, 2), (1, 3)],
        [(3, 1), (2, 3), (2, 1)],
    ]
    expected = {frozenset(ABPair(P[a], P[b]) for a, b in terms) for terms in displayed}
    generated = {frozenset(rec.sum.terms) for rec in all_identities(3)}
    assert generated == expected
    # Vertex 1 sits in A's pair in every term of L_{3,3}(1).
    assert all(1 in (i for i, x in enumerate(p.A, 1) if p.A.count(x) == 2) for p in gen_identity(3, 3, 1).sum.terms)


def test_expansion_index_round_trip():
    for c in range(1, 6):
        for j in range(1, 5):
            v = expansion_vertex(c, j)
            assert v != c
            assert expansion_index(c, v) == j
    with pytest.raises(ValueError):
        expansion_index(3, 3)


def test_bad_arguments():
    with pytest.raises(ValueError):
        gen_identity(4, 4, 4)
    with pytest.raises(ValueError):
        permissible_pairs(4, 2, 2)


def _desk_corpus():
    rng = random.Random(17)
    out = []
    while len(out) < 5:
        n = rng.randint(4, 6)
        pairs = [(rng.randrange(1, i), i) for i in range(2, n + 1)]
        for _ in range(rng.randint(0, 4)):
            u, v = rng.sample(range(1, n + 1), 2)
            pairs.append((min(u, v), max(u, v)))
        out.append(MarkedGraph(n, tuple((u, v, i) for i, (u, v) in enumerate(pairs)), tuple(range(1, n + 1))))
    return out


@pytest.mark.parametrize("m", [3, 4])
def test_determinant_route_agrees_everywhere(m):
    graphs = [triangle(), complete_graph(4), complete_graph(5, [1, 2, 3, 4])] + _desk_corpus()
    for G in graphs:
        if G.n < m:
            continue
        H = G.with_marked(range(1, m + 1))
        lhs = forest_poly(H, all_ones(m)) * forest_poly(H, all_distinct(m))
        for rec in all_identities(m):
            total, scale = evaluate_sum(rec.sum, H)
            assert scale == 1 and total == lhs
            for r in range(1, m + 1):
                assert rhs_via_determinants(H, r, rec.c, rec.j) == lhs


def test_marked_vertices_need_not_come_first():
    G = complete_graph(5, [5, 3, 1, 2])
    S = gen_identity(4, 2, 3).sum
    assert verify_identity(S, G)
    assert verify_identity(S, G.relabeled())
    H = G.relabeled()
    assert rhs_via_determinants(G, 1, 2, 3) == evaluate_sum(S, H)[0]


@pytest.mark.parametrize("m", range(3, 7))
def test_blocks_sum_to_all_nonforbidden_pairs(m):
    J = all_nonforbidden_sum(m)
    assert all(block_sum(m, c) == J for c in range(1, m + 1))
    assert len(J) == (m * (m - 1) // 2) * (2 ** (m - 2))


def test_four_vertex_common_sum():
    J = all_nonforbidden_sum(4)
    assert len(J) == 24
    # A block adds three members of the affine family whose parameters sum to all ones.
    assert J == vy_identity([1] * 8) + 2 * vy_identity([0] * 8)


def test_formal_sum_algebra_and_json():
    S = gen_identity(4, 1, 2).sum
    T = gen_identity(4, 3, 1).sum
    assert S - S == FormalSum(4)
    assert (S + T) - T == S
    assert 2 * S == S + S
    half = S * Fraction(1, 2)
    assert FormalSum.from_json_terms(4, half.to_json_terms()) == half
    with pytest.raises(ValueError):
        S + gen_identity(3, 1, 1).sum


def test_perturbed_identity_fails():
    S = gen_identity(4, 4, 1).sum
    pair = next(iter(S.terms))
    assert not verify_identity(S + FormalSum(4, {pair: 1}), complete_graph(4))


@pytest.mark.parametrize("cj", sorted(VY_SPECIALIZATIONS))
def test_vy_specializations(cj):
    assert vy_identity(VY_SPECIALIZATIONS[cj]) == gen_identity(4, *cj).sum


def test_vy_first_unit_vector_is_l442():
    assert vy_identity([1, 0, 0, 0, 0, 0, 0, 0]) == gen_identity(4, 4, 2).sum


@given(eight)
def test_change_of_variables_round_trip(x):
    assert x_from_y(y_from_x(x)) == x
    assert vy_from_column_identities(y_from_x(x)) == vy_identity(x)


@given(eight)
def test_vy_identity_holds_on_k4(x):
    assert verify_identity(vy_identity(x), complete_graph(4))


def test_vy_terms_use_every_nonforbidden_pair():
    S = vy_identity([Fraction(1, 3)] * 8)
    A, B = enumerate_A(4), enumerate_B(4)
    assert set(S.terms) <= {ABPair(a, b) for a in A for b in B if not is_forbidden(ABPair(a, b))}


def test_three_vertex_identity_terms():
    assert set(gen_identity(3, 3, 1).sum.terms) == {
        ABPair((1, 1, 2), (1, 2, 2)),
        ABPair((1, 2, 1), (1, 1, 2)),
        ABPair((1, 2, 1), (1, 2, 2)),
    }
    assert len(all_nonforbidden_sum(3)) == 6


def test_triangle_determinant_route():
    T = triangle()
    a, b, c = (Poly.var(i) for i in range(3))
    assert rhs_via_determinants(T, 3, 3, 1) == (a + b + c) * a * b * c
    assert verify_identity(gen_identity(3, 3, 1).sum, T)


def test_zero_sum_does_not_verify():
    assert not verify_identity(FormalSum(4), complete_graph(4))


def test_vy_base_points():
    assert vy_identity([0] * 8) == gen_identity(4, 3, 3).sum
    L = lambda c, j: gen_identity(4, c, j).sum  # noqa: E731
    assert vy_from_column_identities([0] * 8) == L(3, 1) + L(3, 2) - L(3, 3)
    assert vy_from_column_identities(y_from_x([0] * 8)) == vy_identity([0] * 8)
