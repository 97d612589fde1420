from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gcsets.errors import IdenticalPoints
from gcsets.geom import (
    Line,
    Point,
    canonical_line,
    collinear,
    incident,
    intersect,
    line_through,
    parametrize,
    rat,
    rat_to_str,
)

rats = st.fractions(max_denominator=10**6).filter(lambda f: abs(f.numerator) <= 10**6)
points = st.builds(Point, rats, rats)
int_triples = st.tuples(*(st.integers(-10**6, 10**6) for _ in range(3))).filter(lambda t: t[0] or t[1])


def P(x, y):
    return Point(Fraction(x), Fraction(y))


@pytest.mark.parametrize("p, q, expected", [
    (P(0, 0), P(1, 1), (1, -1, 0)),
    (P(0, 0), P(0, 5), (1, 0, 0)),
    (P("1/2", 0), P(0, "1/3"), (2, 3, -1)),
])
def test_line_through_examples(p, q, expected):
    line = line_through(p, q)
    assert line.coeffs == expected
    assert incident(line, p) and incident(line, q)


def test_line_through_same_point_raises():
    with pytest.raises(IdenticalPoints):
        line_through(P(1, 2), P(1, 2))


def test_intersect_examples():
    assert intersect(Line(1, 0, 0), Line(0, 1, 0)) == P(0, 0)
    assert intersect(Line(1, -1, 0), Line(1, -1, -1)) is None
    assert intersect(Line(2, 3, -1), Line(1, 0, 0)) == P(0, "1/3")
    assert intersect(Line(1, 0, 0), Line(1, 0, 0)) is None


def test_incident_examples():
    assert incident(Line(1, -1, 0), P(2, 2))
    assert not incident(Line(1, -1, 0), P(2, 3))
    assert incident(Line(2, 3, -1), P("1/2", 0))


def test_line_rejects_non_canonical():
    with pytest.raises(ValueError):
        Line(2, -2, 0)
    with pytest.raises(ValueError):
        Line(-1, 1, 0)
    with pytest.raises(ValueError):
        canonical_line(0, 0, 1)


def test_rat_refuses_floats():
    with pytest.raises(TypeError):
        rat(0.5)
    with pytest.raises(TypeError):
        rat(True)
    assert rat("3/6") == Fraction(1, 2)
    assert rat_to_str(Fraction(4, 2)) == "2" and rat_to_str(Fraction(-1, 3)) == "-1/3"


def test_json_round_trip():
    p = P("-7/3", 5)
    assert p.to_json() == ["-7/3", "5"]
    assert Point.from_json(p.to_json()) == p
    assert Line.from_json([2, -4, 6]) == Line(1, -2, 3)


@given(int_triples)
def test_canonicalization_idempotent(t):
    line = canonical_line(*t)
    assert canonical_line(*line.coeffs) == line
    assert canonical_line(*(-v for v in t)) == line
    assert canonical_line(*(3 * v for v in t)) == line


@given(points, points)
def test_line_through_symmetric_and_incident(p, q):
    if p == q:
        return
    line = line_through(p, q)
    assert line == line_through(q, p)
    assert incident(line, p) and incident(line, q)


@given(int_triples, int_triples)
def test_intersection_lies_on_both(t1, t2):
    l1, l2 = canonical_line(*t1), canonical_line(*t2)
    pt = intersect(l1, l2)
    if pt is None:
        assert l1.a * l2.b == l2.a * l1.b
    else:
        assert incident(l1, pt) and incident(l2, pt)


@given(int_triples, rats)
def test_parametrization_stays_on_line(t, s):
    line = canonical_line(*t)
    assert incident(line, parametrize(line, s))


@given(points, points, rats)
def test_collinear_matches_incidence(p, q, s):
    if p == q:
        return
    line = line_through(p, q)
    r = parametrize(line, s)
    assert collinear(p, q, r)
    off = Point(r.x + line.a, r.y + line.b)
    assert not collinear(p, q, off)
