"""Exact planar geometry over the rationals.

Points carry :class:`fractions.Fraction` coordinates and lines are stored as
canonical integer triples ``(a, b, c)`` for the locus ``a*x + b*y + c = 0``.
Canonical means ``gcd(|a|, |b|, |c|) = 1`` and the first nonzero coefficient
is positive, so two ``Line`` values compare equal exactly when they describe
the same locus.  Nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Union

from .errors import IdenticalPoints

Rat = Fraction
RatLike = Union[int, str, Fraction]


def rat(value: RatLike) -> Fraction:
    """Coerce ``value`` to a ``Fraction``; strings use the ``"num/den"`` form."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact or boolean value {value!r}")
    return Fraction(value)


def rat_to_str(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True, slots=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", rat(self.x))
        object.__setattr__(self, "y", rat(self.y))

    def __repr__(self) -> str:
        return f"Point({rat_to_str(self.x)}, {rat_to_str(self.y)})"

    def to_json(self) -> list[str]:
        return [rat_to_str(self.x), rat_to_str(self.y)]

    @classmethod
    def from_json(cls, data) -> Point:
        x, y = data
        return cls(rat(x), rat(y))


def _canonical_ints(a: int, b: int, c: int) -> tuple[int, int, int]:
    if a == 0 and b == 0:
        raise ValueError("a line needs (a, b) != (0, 0)")
    g = gcd(a, b, c)
    a, b, c = a // g, b // g, c // g
    if a < 0 or (a == 0 and b < 0):
        a, b, c = -a, -b, -c
    return a, b, c


@dataclass(frozen=True, order=True, slots=True)
class Line:
    """The line ``a*x + b*y + c = 0`` in canonical integer form."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if (self.a, self.b, self.c) != _canonical_ints(self.a, self.b, self.c):
            raise ValueError(
                f"({self.a}, {self.b}, {self.c}) is not canonical; use canonical_line"
            )

    def __repr__(self) -> str:
        return f"Line({self.a}, {self.b}, {self.c})"

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def value(self, p: Point) -> Fraction:
        return self.a * p.x + self.b * p.y + self.c

    def to_json(self) -> list[int]:
        return [self.a, self.b, self.c]

    @classmethod
    def from_json(cls, data) -> Line:
        a, b, c = data
        return canonical_line(a, b, c)


def canonical_line(a: RatLike, b: RatLike, c: RatLike) -> Line:
    """Canonical ``Line`` for ``a*x + b*y + c = 0`` with rational coefficients."""
    fa, fb, fc = rat(a), rat(b), rat(c)
    m = lcm(fa.denominator, fb.denominator, fc.denominator)
    ints = (int(fa * m), int(fb * m), int(fc * m))
    return Line(*_canonical_ints(*ints))


def line_through(p: Point, q: Point) -> Line:
    if p == q:
        raise IdenticalPoints(f"cannot draw a line through a single point {p}")
    a = q.y - p.y
    b = p.x - q.x
    c = -(a * p.x + b * p.y)
    return canonical_line(a, b, c)


def intersect(l1: Line, l2: Line) -> Point | None:
    """Intersection point, or ``None`` when the lines are parallel or equal."""
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        return None
    x = Fraction(l1.b * l2.c - l2.b * l1.c, det)
    y = Fraction(l1.c * l2.a - l2.c * l1.a, det)
    return Point(x, y)


def incident(line: Line, p: Point) -> bool:
    # integer form of a*x + b*y + c == 0, avoids building intermediate Fractions
    xn, xd = p.x.numerator, p.x.denominator
    yn, yd = p.y.numerator, p.y.denominator
    return line.a * xn * yd + line.b * yn * xd + line.c * xd * yd == 0


def parametrize(line: Line, t: RatLike) -> Point:
    """Point ``gamma(t)`` of the canonical parametrization of ``line``.

    ``gamma(t) = (t, -(a t + c)/b)`` when ``b != 0``, else ``(-c/a, t)``.
    """
    t = rat(t)
    if line.b != 0:
        return Point(t, -(line.a * t + line.c) / Fraction(line.b))
    return Point(Fraction(-line.c, line.a), t)


def collinear(p: Point, q: Point, r: Point) -> bool:
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x) == 0
