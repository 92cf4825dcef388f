import sympy
import pytest
from hypothesis import given, strategies as st

from forestident.polyring import MissingVariable, Poly, pack, poly_sum, unpack

NVARS = 4
SYMS = sympy.symbols(f"a0:{NVARS}")

monomials = st.dictionaries(st.integers(0, NVARS - 1), st.integers(1, 3), max_size=NVARS)
polys = st.lists(st.tuples(monomials, st.integers(-5, 5)), max_size=6).map(Poly.from_terms)


def to_sympy(p: Poly):
    expr = sympy.Integer(0)
    for exps, c in p.terms():
        term = sympy.Integer(c)
        for v, e in exps.items():
            term *= SYMS[v] ** e
        expr += term
    return sympy.expand(expr)


@given(polys, polys)
def test_arithmetic_matches_sympy(p, q):
    assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))
    assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p - p == Poly.zero()


@given(polys, st.lists(st.integers(-6, 6), min_size=NVARS, max_size=NVARS))
def test_eval_matches_sympy(p, point):
    assignment = dict(enumerate(point))
    expected = to_sympy(p).subs(dict(zip(SYMS, point)))
    assert p.eval(assignment) == int(expected)
    assert p.eval_mod(assignment, 101) == int(expected) % 101


@given(polys)
def test_text_round_trip(p):
    assert Poly.parse(p.to_text()) == p


@given(monomials)
def test_pack_round_trip(exps):
    assert unpack(pack(exps)) == exps


def test_canonical_text():
    names = {"a": 0, "b": 1, "c": 2}
    p = Poly.parse("b*c + a*b + 3*a^2 - 2", names)
    assert p.to_text({0: "a", 1: "b", 2: "c"}) == "3*a^2 + a*b + b*c - 2"
    assert Poly.zero().to_text() == "0"
    assert Poly.parse("a - a", names) == 0


def test_complement_swaps_squarefree_monomials():
    p = Poly.parse("a0*a1 + a2")
    assert p.complement(range(3)) == Poly.parse("a2 + a0*a1")
    with pytest.raises(ValueError):
        Poly.parse("a0^2").complement(range(3))
    with pytest.raises(ValueError):
        Poly.parse("a5").complement(range(3))


def test_degree_and_squarefree():
    p = Poly.parse("a0*a1*a2 + a3")
    assert p.degree() == 3
    assert p.is_squarefree()
    assert not Poly.parse("a0^2").is_squarefree()
    assert p.variables() == {0, 1, 2, 3}


def test_missing_variable_is_reported():
    with pytest.raises(MissingVariable):
        Poly.parse("a0*a3").eval({0: 1})


def test_power_and_sum():
    x = Poly.var(0)
    assert (x + 1) ** 3 == Poly.parse("a0^3 + 3*a0^2 + 3*a0 + 1")
    assert poly_sum([x, x, Poly.const(2)]) == 2 * x + 2


def test_exponent_overflow_raises():
    big = Poly.from_terms([({0: 40000}, 1)])
    with pytest.raises(OverflowError):
        big * big


def test_bad_text_rejected():
    with pytest.raises(ValueError):
        Poly.parse("")
    with pytest.raises(ValueError):
        Poly.parse("x*y")


def test_small_examples():
    names = {"a": 0, "b": 1, "c": 2}
    P = lambda s: Poly.parse(s, names)  # noqa: E731
    assert P("a*b") + P("-a*b") == 0
    assert P("a + b + c") * P("a*b*c") == P("a^2*b*c + a*b^2*c + a*b*c^2")
    assert P("a*b") * P("a*c") == P("a^2*b*c")
    assert P("a*b") * Poly.zero() == 0
    assert P("a^2*b*c + a*b^2*c + a*b*c^2").eval({0: 1, 1: 1, 2: 1}) == 3
    assert P("a*b*c").eval({0: 2, 1: 3, 2: 5}) == 30


@given(polys, polys, st.lists(st.integers(-50, 50), min_size=NVARS, max_size=NVARS))
def test_eval_is_a_ring_homomorphism(p, q, point):
    w = dict(enumerate(point))
    assert (p * q).eval(w) == p.eval(w) * q.eval(w)
    assert (p + q).eval(w) == p.eval(w) + q.eval(w)


def test_big_coefficients_do_not_overflow():
    p = Poly.const(10**40) * Poly.var(0)
    assert (p * p).coefficient({0: 2}) == 10**80
