"""Exact bivariate polynomials of bounded total degree and the linear algebra
needed to interpolate on a node set.

Coefficients are ``Fraction`` values keyed by exponent pairs ``(i, j)`` for the
monomial ``x**i * y**j``.  The degree bound is carried explicitly so that a
polynomial of the space of degree <= n whose top forms vanish is still an
element of that space.

Monomials are ordered graded-lexicographically: by ``i + j``, then by ``i``.
Nodes are used in the order the caller provides (``NodeSet`` keeps them
sorted), which makes every determinant deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from gmpy2 import divexact, mpz

from .errors import NodeAbsent, NotCorrect, NotDivisible, SizeMismatch
from .geom import Line, Point, rat, rat_to_str

if TYPE_CHECKING:
    from .gcset import NodeSet


@lru_cache(maxsize=None)
def monomials(n: int) -> tuple[tuple[int, int], ...]:
    """Exponent pairs of the monomial basis of degree <= n, in canonical order."""
    return tuple(sorted(((i, d - i) for d in range(n + 1) for i in range(d + 1)),
                        key=lambda e: (e[0] + e[1], e[0])))


def dim(n: int) -> int:
    return comb(n + 2, 2)


@dataclass(frozen=True, eq=False)
class BivarPoly:
    degree_bound: int
    coeffs: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.degree_bound < 0:
            raise ValueError("degree_bound must be nonnegative")
        clean = {}
        for (i, j), c in self.coeffs.items():
            c = rat(c)
            if c == 0:
                continue
            if i < 0 or j < 0 or i + j > self.degree_bound:
                raise ValueError(f"term x^{i} y^{j} exceeds degree bound {self.degree_bound}")
            clean[(i, j)] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def constant(cls, value, degree_bound: int = 0) -> BivarPoly:
        return cls(degree_bound, {(0, 0): rat(value)})

    @classmethod
    def from_line(cls, line: Line) -> BivarPoly:
        return cls(1, {(1, 0): line.a, (0, 1): line.b, (0, 0): line.c})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.degree_bound == other.degree_bound and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"BivarPoly[{self.degree_bound}](0)"
        parts = []
        for (i, j) in reversed(monomials(self.degree_bound)):
            c = self.coeffs.get((i, j))
            if c is None:
                continue
            mono = "*".join(s for s in (_power("x", i), _power("y", j)) if s)
            parts.append(f"{rat_to_str(c)}*{mono}" if mono else rat_to_str(c))
        return f"BivarPoly[{self.degree_bound}](" + " + ".join(parts) + ")"

    def __call__(self, pt: Point) -> Fraction:
        return evaluate(self, pt)

    def is_zero(self) -> bool:
        return not self.coeffs

    def total_degree(self) -> int:
        """Effective degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self.coeffs), default=-1)

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.coeffs.get((i, j), Fraction(0))

    def with_bound(self, degree_bound: int) -> BivarPoly:
        return BivarPoly(degree_bound, self.coeffs)

    def __add__(self, other: BivarPoly) -> BivarPoly:
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return BivarPoly(max(self.degree_bound, other.degree_bound), out)

    def __neg__(self) -> BivarPoly:
        return BivarPoly(self.degree_bound, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: BivarPoly) -> BivarPoly:
        return self + (-other)

    def scale(self, factor) -> BivarPoly:
        factor = rat(factor)
        return BivarPoly(self.degree_bound, {e: c * factor for e, c in self.coeffs.items()})

    def to_json(self) -> dict:
        terms = [[i, j, rat_to_str(self.coeffs[(i, j)])]
                 for (i, j) in monomials(self.degree_bound) if (i, j) in self.coeffs]
        return {"degree_bound": self.degree_bound, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> BivarPoly:
        return cls(int(data["degree_bound"]),
                   {(int(i), int(j)): rat(c) for i, j, c in data["terms"]})


def _power(var: str, k: int) -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


def evaluate(p: BivarPoly, pt: Point) -> Fraction:
    """Exact value of ``p`` at ``pt``."""
    if not p.coeffs:
        return Fraction(0)
    d = p.degree_bound
    xs = [Fraction(1)]
    ys = [Fraction(1)]
    for _ in range(d):
        xs.append(xs[-1] * pt.x)
        ys.append(ys[-1] * pt.y)
    return sum((c * xs[i] * ys[j] for (i, j), c in p.coeffs.items()), Fraction(0))


def mul_line(p: BivarPoly, line: Line) -> BivarPoly:
    out: dict[tuple[int, int], Fraction] = {}
    for (i, j), c in p.coeffs.items():
        for e, f in (((i + 1, j), line.a), ((i, j + 1), line.b), ((i, j), line.c)):
            if f:
                out[e] = out.get(e, 0) + c * f
    return BivarPoly(p.degree_bound + 1, out)


def _poly_mul_1d(u: Sequence[Fraction], v: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                out[i + j] += a * b
    return out


def restrict_to_line(p: BivarPoly, line: Line) -> list[Fraction]:
    """Coefficients (ascending powers of t) of ``t -> p(gamma(t))``.

    ``gamma`` is the canonical parametrization of ``line``: ``(t, -(a t + c)/b)``
    if ``b != 0``, otherwise ``(-c/a, t)``.  Trailing zeros are stripped, so the
    result is ``[]`` exactly when ``line`` divides ``p``.
    """
    if line.b != 0:
        xt = [Fraction(0), Fraction(1)]
        yt = [Fraction(-line.c, line.b), Fraction(-line.a, line.b)]
    else:
        xt = [Fraction(-line.c, line.a)]
        yt = [Fraction(0), Fraction(1)]
    d = p.degree_bound
    xp = [[Fraction(1)]]
    yp = [[Fraction(1)]]
    for _ in range(d):
        xp.append(_poly_mul_1d(xp[-1], xt))
        yp.append(_poly_mul_1d(yp[-1], yt))
    out = [Fraction(0)] * (d + 1)
    for (i, j), c in p.coeffs.items():
        for k, v in enumerate(_poly_mul_1d(xp[i], yp[j])):
            if v:
                out[k] += c * v
    while out and out[-1] == 0:
        out.pop()
    return out


def divide_by_line(p: BivarPoly, line: Line) -> BivarPoly:
    """Exact quotient ``q`` with ``mul_line(q, line) == p``."""
    if p.degree_bound == 0:
        if p.is_zero():
            return BivarPoly(0)
        raise NotDivisible(f"{line} does not divide the nonzero constant {p}")
    rem = dict(p.coeffs)
    quot: dict[tuple[int, int], Fraction] = {}
    a, b, c = line.a, line.b, line.c
    if a != 0:
        # long division in x: a*x is the leading term of the divisor
        top = max((i for i, _ in rem), default=0)
        for i in range(top, 0, -1):
            for (ii, j) in sorted(e for e in rem if e[0] == i):
                r = rem.pop((ii, j))
                if r == 0:
                    continue
                qc = r / a
                quot[(i - 1, j)] = quot.get((i - 1, j), 0) + qc
                if b:
                    rem[(i - 1, j + 1)] = rem.get((i - 1, j + 1), 0) - qc * b
                if c:
                    rem[(i - 1, j)] = rem.get((i - 1, j), 0) - qc * c
    else:
        top = max((j for _, j in rem), default=0)
        for j in range(top, 0, -1):
            for (i, jj) in sorted(e for e in rem if e[1] == j):
                r = rem.pop((i, jj))
                if r == 0:
                    continue
                qc = r / b
                quot[(i, j - 1)] = quot.get((i, j - 1), 0) + qc
                if c:
                    rem[(i, j - 1)] = rem.get((i, j - 1), 0) - qc * c
    if any(v != 0 for v in rem.values()):
        raise NotDivisible(f"{line} does not divide {p}")
    return BivarPoly(p.degree_bound - 1, quot)


# ---------------------------------------------------------------------------
# integer polynomials
#
# A fundamental polynomial is a rational multiple of an integer column of the
# adjugate.  Divisibility by a primitive integer line only depends on that
# column, and by Gauss's lemma every exact quotient stays integral, so the
# factorization loop never needs to touch Fractions.

def primitive_part(coeffs: Mapping[tuple[int, int], int]) -> tuple[int, dict[tuple[int, int], int]]:
    """``(g, q)`` with ``coeffs == g * q`` and ``q`` of content 1 (``g > 0``)."""
    g = gcd(*coeffs.values()) if coeffs else 1
    g = g or 1
    return g, {e: v // g for e, v in coeffs.items() if v}


def int_restrict_vanishes(coeffs: Mapping[tuple[int, int], int], bound: int, line: Line) -> bool:
    """Does ``line`` divide the integer polynomial ``coeffs`` of degree <= bound?

    Substitutes the canonical parametrization, scaled by ``b**bound`` (or uses
    ``x = -c/a`` scaled by ``a**bound`` when ``b == 0``) so all arithmetic is
    integral, and checks that every coefficient in ``t`` vanishes.
    """
    a, b, c = mpz(line.a), mpz(line.b), mpz(line.c)
    if b != 0:
        # x = t, y = (-(a t + c)) / b;  b^bound * x^i y^j = t^i (-(a t + c))^j b^(bound - j)
        lin = [-c, -a]
        fixed = None
    else:
        # x = -c / a, y = t;  a^bound * x^i y^j = (-c)^i a^(bound - i) t^j
        lin = None
        fixed = -c
    lead = b if b != 0 else a
    lead_pows = [mpz(1)]
    for _ in range(bound):
        lead_pows.append(lead_pows[-1] * lead)
    out = [mpz(0)] * (bound + 1)
    if lin is not None:
        lin_pows = [[mpz(1)]]
        for _ in range(bound):
            prev = lin_pows[-1]
            nxt = [mpz(0)] * (len(prev) + 1)
            for k, v in enumerate(prev):
                nxt[k] += v * lin[0]
                nxt[k + 1] += v * lin[1]
            lin_pows.append(nxt)
        for (i, j), v in coeffs.items():
            f = v * lead_pows[bound - j]
            for k, w in enumerate(lin_pows[j]):
                if w:
                    out[i + k] += f * w
    else:
        fix_pows = [mpz(1)]
        for _ in range(bound):
            fix_pows.append(fix_pows[-1] * fixed)
        for (i, j), v in coeffs.items():
            out[j] += v * fix_pows[i] * lead_pows[bound - i]
    return not any(out)


def int_divide_by_line(coeffs: Mapping[tuple[int, int], int], line: Line) -> dict[tuple[int, int], int]:
    """Exact integer quotient of ``coeffs`` by a primitive line; raises
    ``NotDivisible`` if the division leaves a remainder or a fraction."""
    rem = dict(coeffs)
    quot: dict[tuple[int, int], int] = {}
    a, b, c = line.a, line.b, line.c
    # long division on x when a != 0, else on y
    lead, main = (a, 0) if a != 0 else (b, 1)
    top = max((e[main] for e in rem), default=0)
    for d in range(top, 0, -1):
        for e in sorted(k for k in rem if k[main] == d):
            r = rem.pop(e)
            if r == 0:
                continue
            qc, m = divmod(r, lead)
            if m:
                raise NotDivisible(f"{line} does not divide the polynomial")
            qe = (e[0] - 1, e[1]) if main == 0 else (e[0], e[1] - 1)
            quot[qe] = quot.get(qe, 0) + qc
            if main == 0 and b:
                k = (e[0] - 1, e[1] + 1)
                rem[k] = rem.get(k, 0) - qc * b
            if c:
                rem[qe] = rem.get(qe, 0) - qc * c
    if any(rem.values()):
        raise NotDivisible(f"{line} does not divide the polynomial")
    return {e: v for e, v in quot.items() if v}


# ---------------------------------------------------------------------------
# fraction-free linear algebra


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    m = [[mpz(v) for v in row] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            f = rowi[k]
            rowi[k + 1:] = [divexact(pk * v - f * w, prev) for v, w in zip(rowi[k + 1:], rowk[k + 1:])]
            rowi[k] = 0
        prev = pk
    return int(sign * m[n - 1][n - 1])


def fraction_free_inverse(matrix: Sequence[Sequence[int]]) -> tuple[int, list[list[int]]]:
    """Return ``(d, R)`` with ``R = d * matrix^{-1}`` and ``d = ±det(matrix)``.

    Fraction-free Gauss-Jordan on ``[matrix | I]``; every intermediate entry is
    a minor of the augmented matrix, so each division by the previous pivot is
    exact.  ``d`` is the last pivot, i.e. the determinant of the row-permuted
    matrix.  Raises ``ZeroDivisionError`` if the matrix is singular.
    """
    n = len(matrix)
    one, zero = mpz(1), mpz(0)
    aug = [[mpz(v) for v in row] + [one if j == i else zero for j in range(n)]
           for i, row in enumerate(matrix)]
    prev = one
    for k in range(n):
        if aug[k][k] == 0:
            for r in range(k + 1, n):
                if aug[r][k] != 0:
                    aug[k], aug[r] = aug[r], aug[k]
                    break
            else:
                raise ZeroDivisionError("singular matrix")
        pk = aug[k][k]
        rowk = aug[k]
        for i in range(n):
            if i == k:
                continue
            rowi = aug[i]
            f = rowi[k]
            if f == 0:
                if pk != prev:
                    rowi[k + 1:] = [divexact(pk * v, prev) for v in rowi[k + 1:]]
            else:
                rowi[k + 1:] = [divexact(pk * v - f * w, prev) for v, w in zip(rowi[k + 1:], rowk[k + 1:])]
                rowi[k] = 0
            if i < k:
                rowi[i] = pk
        prev = pk
    return int(prev), [[int(v) for v in row[n:]] for row in aug]


def _collocation_rows(nodes: Sequence[Point], n: int) -> tuple[list[list[int]], list[int]]:
    """Integer collocation rows and the per-row scale that cleared denominators."""
    monos = monomials(n)
    rows, scales = [], []
    for p in nodes:
        xs = [Fraction(1)]
        ys = [Fraction(1)]
        for _ in range(n):
            xs.append(xs[-1] * p.x)
            ys.append(ys[-1] * p.y)
        entries = [xs[i] * ys[j] for i, j in monos]
        s = lcm(*(e.denominator for e in entries))
        rows.append([e.numerator * (s // e.denominator) for e in entries])
        scales.append(s)
    return rows, scales


def collocation_matrix(nodes: Sequence[Point], n: int) -> list[list[Fraction]]:
    monos = monomials(n)
    return [[p.x ** i * p.y ** j for i, j in monos] for p in nodes]


def _check_size(X: NodeSet) -> None:
    if len(X.nodes) != dim(X.degree):
        raise SizeMismatch(f"{len(X.nodes)} nodes cannot be {X.degree}-correct; "
                           f"need {dim(X.degree)}")


def correctness_determinant(X: NodeSet | Sequence[Point]) -> Fraction:
    """Determinant of the collocation matrix (rows: nodes, columns: monomials).

    Also accepts a bare point sequence, sorted canonically, so that degenerate
    configurations a ``NodeSet`` refuses (e.g. n+2 collinear points) still get
    their zero determinant."""
    if hasattr(X, "degree") and hasattr(X, "nodes"):
        _check_size(X)
        nodes, n = X.nodes, X.degree
    else:
        nodes = tuple(sorted(X))
        if len(set(nodes)) != len(nodes):
            raise ValueError("nodes must be pairwise distinct")
        n = 0
        while dim(n) < len(nodes):
            n += 1
        if dim(n) != len(nodes):
            raise SizeMismatch(f"{len(nodes)} is not a triangular number C(n+2,2)")
    rows, scales = _collocation_rows(nodes, n)
    det = bareiss_determinant(rows)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(det, denom)


@dataclass(frozen=True)
class InterpolationBasis:
    """Inverse of a node set's collocation matrix in fraction-free form.

    ``coefficient(m, a) = adj[m][a] * scales[a] / pivot`` is the coefficient of
    monomial ``m`` in the fundamental polynomial of node ``a``.
    """

    degree: int
    nodes: tuple[Point, ...]
    pivot: int
    adj: tuple[tuple[int, ...], ...]
    scales: tuple[int, ...]

    def polynomial(self, a: int) -> BivarPoly:
        monos = monomials(self.degree)
        s = self.scales[a]
        return BivarPoly(self.degree, {
            e: Fraction(self.adj[m][a] * s, self.pivot)
            for m, e in enumerate(monos) if self.adj[m][a]
        })

    def integer_column(self, a: int) -> dict[tuple[int, int], int]:
        """Integer polynomial proportional to the fundamental polynomial of ``a``:
        the fundamental polynomial equals it times ``scales[a] / pivot``."""
        return {e: self.adj[m][a] for m, e in enumerate(monomials(self.degree)) if self.adj[m][a]}

    def polynomials(self) -> list[BivarPoly]:
        return [self.polynomial(a) for a in range(len(self.nodes))]

    def modular_coefficients(self, q: int) -> list[list[int]] | None:
        """Coefficient matrix (rows: monomials, cols: nodes) reduced mod prime q,
        or ``None`` when the pivot is not invertible mod q."""
        if self.pivot % q == 0:
            return None
        inv = pow(self.pivot, -1, q)
        sc = [(s % q) * inv % q for s in self.scales]
        return [[(v % q) * sc[a] % q for a, v in enumerate(row)] for row in self.adj]


def interpolation_basis(nodes: Sequence[Point], n: int) -> InterpolationBasis:
    if len(nodes) != dim(n):
        raise SizeMismatch(f"{len(nodes)} nodes cannot be {n}-correct; need {dim(n)}")
    rows, scales = _collocation_rows(nodes, n)
    try:
        pivot, adj = fraction_free_inverse(rows)
    except ZeroDivisionError:
        raise NotCorrect(f"node set is not {n}-correct (singular collocation matrix)") from None
    return InterpolationBasis(n, tuple(nodes), pivot, tuple(map(tuple, adj)), tuple(scales))


def fundamental_polynomials(X: NodeSet) -> dict[Point, BivarPoly]:
    """All fundamental polynomials of an n-correct set, from one elimination."""
    _check_size(X)
    basis = interpolation_basis(X.nodes, X.degree)
    return dict(zip(X.nodes, basis.polynomials()))


def fundamental_polynomial(X: NodeSet, A: Point) -> BivarPoly:
    if A not in X.node_index:
        raise NodeAbsent(A)
    _check_size(X)
    basis = interpolation_basis(X.nodes, X.degree)
    return basis.polynomial(X.node_index[A])


def interpolate(X: NodeSet, values: Mapping[Point, object] | Iterable) -> BivarPoly:
    """Lagrange interpolant of ``values`` (mapping node -> value, or a sequence
    aligned with ``X.nodes``)."""
    basis = interpolation_basis(X.nodes, X.degree)
    if isinstance(values, Mapping):
        vals = [rat(values[p]) for p in X.nodes]
    else:
        vals = [rat(v) for v in values]
    out = BivarPoly(X.degree)
    for a, v in enumerate(vals):
        if v:
            out = out + basis.polynomial(a).scale(v)
    return out
