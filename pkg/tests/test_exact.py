import random
from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from forestident.exact import (
    PRIME,
    ModularEchelon,
    bareiss_det,
    exact_rank,
    nullspace,
    rational_reconstruct,
    submatrix,
)

square = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)
rect = st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(
    lambda rc: st.lists(
        st.lists(st.integers(-3, 3), min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]
    )
)


@given(square)
def test_bareiss_matches_sympy(M):
    assert bareiss_det(M) == sympy.Matrix(M).det()


@given(rect)
def test_rank_matches_sympy(M):
    assert exact_rank(M) == sympy.Matrix(M).rank()


@given(rect)
def test_nullspace_is_kernel_of_full_dimension(M):
    ncols = len(M[0])
    basis = nullspace(M, ncols)
    assert len(basis) == ncols - exact_rank(M)
    for v in basis:
        assert all(sum(Fraction(a) * x for a, x in zip(row, v)) == 0 for row in M)
    if basis:
        assert exact_rank(basis) == len(basis)


def test_rank_of_fractions():
    M = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]
    assert exact_rank(M) == 1
    assert exact_rank([[1 if i == j else 0 for j in range(5)] for i in range(5)]) == 5
    assert exact_rank([]) == 0


def test_submatrix_is_one_based():
    M = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
    assert submatrix(M, {1}, {3}) == [[4, 5], [7, 8]]
    assert bareiss_det([]) == 1


def test_modular_echelon_agrees_with_exact_rank():
    rng = random.Random(4)
    for _ in range(20):
        rows = [[rng.randint(-2, 2) for _ in range(7)] for _ in range(rng.randint(1, 9))]
        ech = ModularEchelon(7)
        history = []
        for r in rows:
            ech.add(r)
            history.append(ech.rank)
        assert ech.rank == exact_rank(rows)
        assert history == sorted(history)
        for v in ech.kernel():
            assert all(sum(a * x for a, x in zip(r, v)) % PRIME == 0 for r in rows)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rational_reconstruction_round_trip(n, d):
    q = Fraction(n, d)
    image = q.numerator * pow(q.denominator, PRIME - 2, PRIME) % PRIME
    assert rational_reconstruct(image) == q
