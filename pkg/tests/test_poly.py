from fractions import Fraction
from itertools import product
from math import comb

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from gcsets.constructors import chung_yao, principal_lattice
from gcsets.errors import NodeAbsent, NotCorrect, NotDivisible, SizeMismatch
from gcsets.gcset import NodeSet
from gcsets.geom import Line, Point
from gcsets.poly import (
    BivarPoly,
    bareiss_determinant,
    correctness_determinant,
    dim,
    divide_by_line,
    evaluate,
    fraction_free_inverse,
    fundamental_polynomial,
    fundamental_polynomials,
    int_divide_by_line,
    int_restrict_vanishes,
    interpolate,
    monomials,
    mul_line,
    restrict_to_line,
)

x, y = sp.symbols("x y")


def bp(expr, bound=None) -> BivarPoly:
    """BivarPoly from a sympy expression (test oracle path)."""
    poly = sp.Poly(sp.expand(expr), x, y)
    coeffs = {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}
    return BivarPoly(bound if bound is not None else poly.total_degree(), coeffs)


def P(a, b):
    return Point(Fraction(a), Fraction(b))


def test_monomial_order_and_dim():
    assert monomials(2) == ((0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0))
    assert all(dim(n) == comb(n + 2, 2) == len(monomials(n)) for n in range(8))


def test_evaluate_examples():
    assert evaluate(bp(x + y - 3), P(1, 2)) == 0
    assert evaluate(BivarPoly.constant(1), P(7, -3)) == 1
    assert evaluate(bp((x - 1) * (y - 2)), P(3, 5)) == 6


def test_mul_line_examples():
    assert mul_line(BivarPoly.constant(1), Line(1, 0, 0)) == bp(x)
    assert mul_line(bp(x), Line(0, 1, 0)) == bp(x * y)
    assert mul_line(bp(x + y), Line(1, 1, -1)) == bp(x**2 + 2 * x * y + y**2 - x - y)


def test_restrict_to_line_examples():
    assert not any(restrict_to_line(bp(x - y), Line(1, -1, 0)))
    assert restrict_to_line(bp(x + y), Line(1, -1, 0))[:2] == [0, 2]
    r = restrict_to_line(bp(x**2 + y**2 - 1), Line(0, 1, 0))
    assert r[:3] == [-1, 0, 1] and not any(r[3:])


def test_divide_by_line_examples():
    assert divide_by_line(bp(x**2 - y**2), Line(1, -1, 0)) == bp(x + y, 1)
    with pytest.raises(NotDivisible):
        divide_by_line(bp(x), Line(0, 1, 0))
    p = bp((x + y - 3) * (2 * x - y + 1))
    assert divide_by_line(p, Line(2, -1, 1)) == bp(x + y - 3, 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=6, max_size=6),
       st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)).filter(lambda t: t[0] or t[1]))
def test_division_round_trip(cs, abc):
    from gcsets.geom import canonical_line
    q = BivarPoly(2, dict(zip(monomials(2), map(Fraction, cs))))
    line = canonical_line(*abc)
    p = mul_line(q, line)
    assert divide_by_line(p, line) == q
    ints = {m: int(v) for m, v in p.coeffs.items()}
    assert int_restrict_vanishes(ints, 3, line)
    assert {m: Fraction(v) for m, v in int_divide_by_line(ints, line).items() if v} == dict(q.coeffs)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=10, max_size=10),
       st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)).filter(lambda t: t[0] or t[1]))
def test_integer_divisibility_agrees_with_rational(cs, abc):
    from gcsets.geom import canonical_line
    p = BivarPoly(3, dict(zip(monomials(3), map(Fraction, cs))))
    line = canonical_line(*abc)
    rational = not any(restrict_to_line(p, line))
    assert int_restrict_vanishes({m: int(v) for m, v in p.coeffs.items()}, 3, line) == rational


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7).flatmap(lambda k: st.lists(
    st.lists(st.integers(-20, 20), min_size=k, max_size=k), min_size=k, max_size=k)))
def test_bareiss_matches_sympy(rows):
    oracle = sp.Matrix(rows).det()
    assert bareiss_determinant(rows) == oracle
    if oracle == 0:
        with pytest.raises(ZeroDivisionError):
            fraction_free_inverse(rows)
        return
    d, adj = fraction_free_inverse(rows)
    assert abs(d) == abs(oracle)
    assert sp.Matrix(rows) * sp.Matrix(adj) == d * sp.eye(len(rows))


def test_prop_vanishing_on_n_plus_one_points():
    # a cubic vanishing at 4 points of a line is divisible by it
    line = Line(1, -2, 3)
    p = mul_line(bp(x**2 - 3 * y + 1, 2), line)
    assert not any(restrict_to_line(p, line))


def test_correctness_determinant_examples():
    assert correctness_determinant(NodeSet(1, (P(0, 0), P(1, 0), P(0, 1)))) == 1
    assert correctness_determinant([P(0, 0), P(1, 1), P(2, 2)]) == 0
    assert correctness_determinant([P(0, 0), P(1, 0), P(0, 1)]) == 1
    assert correctness_determinant(chung_yao(3, 0)) != 0
    with pytest.raises(SizeMismatch):
        NodeSet(1, (P(0, 0), P(1, 0)))


def test_fundamental_polynomial_examples():
    X = NodeSet(1, (P(0, 0), P(1, 0), P(0, 1)))
    assert fundamental_polynomial(X, P(1, 0)) == bp(x, 1)
    assert fundamental_polynomial(X, P(0, 0)) == bp(1 - x - y, 1)
    pl2 = principal_lattice(2)
    assert fundamental_polynomial(pl2, P(0, 0)) == bp((2 - x - y) * (1 - x - y) / 2, 2)
    with pytest.raises(NodeAbsent):
        fundamental_polynomial(X, P(5, 5))
    conic = NodeSet(2, tuple(P(t, Fraction(1, t)) for t in (1, 2, 3, -1, -2, Fraction(1, 2))))
    with pytest.raises(NotCorrect):
        fundamental_polynomial(conic, P(1, 1))


def _pl_product(n: int, i: int, j: int):
    """Product formula for the principal lattice node (i, j)."""
    k = n - i - j
    expr = sp.Integer(1)
    for a in range(i):
        expr *= (x - a) / sp.Integer(i - a)
    for b in range(j):
        expr *= (y - b) / sp.Integer(j - b)
    for c in range(k):
        expr *= (n - x - y - c) / sp.Integer(k - c)
    return expr


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_principal_lattice_product_formula(n):
    X = principal_lattice(n)
    basis = fundamental_polynomials(X)
    for i, j in product(range(n + 1), repeat=2):
        if i + j <= n:
            assert basis[P(i, j)] == bp(_pl_product(n, i, j), n)


def test_pl5_frozen_value():
    # oracle: the product formula at (1, 1) for n = 5 is
    # x*y*(5-x-y)(4-x-y)(3-x-y)/6, evaluated by hand in Fractions at (1/2, 1/3)
    p = fundamental_polynomial(principal_lattice(5), P(1, 1))
    assert evaluate(p, P("1/2", "1/3")) == Fraction(6175, 7776)


def test_delta_and_partition_of_unity_match_sympy_solve():
    X = chung_yao(2, 3)
    basis = fundamental_polynomials(X)
    total = BivarPoly(2)
    for A, p in basis.items():
        for B in X.nodes:
            assert evaluate(p, B) == (1 if A == B else 0)
        total = total + p
    assert total == BivarPoly.constant(1, 2)
    # independent oracle: sympy linear solve of the collocation system
    mons = monomials(2)
    M = sp.Matrix([[sp.Rational(B.x) ** i * sp.Rational(B.y) ** j for i, j in mons] for B in X.nodes])
    A = X.nodes[0]
    rhs = sp.Matrix([1 if B == A else 0 for B in X.nodes])
    sol = M.LUsolve(rhs)
    assert basis[A] == BivarPoly(2, {m: Fraction(int(c.p), int(c.q)) for m, c in zip(mons, sol)})


def test_interpolate_reproduces_polynomials():
    X = chung_yao(3, 1)
    target = bp(x**3 - 2 * x * y + 5, 3)
    assert interpolate(X, {B: evaluate(target, B) for B in X.nodes}) == target
