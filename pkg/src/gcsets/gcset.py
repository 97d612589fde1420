"""Node sets and their structural analysis.

A :class:`NodeSet` of degree ``n`` holds ``(n+1)(n+2)/2`` distinct points in
canonical (sorted) order.  :class:`GCContext` wraps one node set and caches the
expensive derived data: the line incidence table, the interpolation basis, the
fundamental polynomials and their line factorizations.  Every public operation
accepts either a ``NodeSet`` or a ``GCContext``; passing the context reuses its
caches.

Subsets of a node set are handled internally as integer bitmasks over the
canonical node indices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, isqrt
from typing import Any, Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    NodeAbsent,
    NotCorrect,
    NotFullyFactorable,
    SizeMismatch,
    TooManyCollinear,
)
from .geom import Line, Point, incident, line_through
from .poly import (
    BivarPoly,
    InterpolationBasis,
    int_divide_by_line,
    int_restrict_vanishes,
    interpolation_basis,
    monomials,
    mul_line,
    primitive_part,
)

log = logging.getLogger(__name__)

# primes below 2**26: products of two residues stay below 2**52, so a 45-term
# dot product fits in int64
_PRIMES = (67108859, 67108837, 67108819, 67108777)
_T0 = 7919


def degree_for_size(size: int) -> int:
    """The ``n`` with ``C(n+2, 2) == size``; raises ``SizeMismatch`` otherwise."""
    n = (isqrt(8 * size + 1) - 3) // 2
    if n < 0 or comb(n + 2, 2) != size:
        raise SizeMismatch(f"{size} is not a triangular number C(n+2,2)")
    return n


@dataclass(frozen=True)
class Provenance:
    """How a node set was constructed; ``spec`` holds the family-specific geometry."""

    family: str
    degree: int
    seed: int | None = None
    spec: Any = None


@dataclass(frozen=True, eq=False)
class NodeSet:
    degree: int
    nodes: tuple[Point, ...]
    provenance: Provenance | None = None

    def __post_init__(self) -> None:
        pts = tuple(sorted(self.nodes))
        object.__setattr__(self, "nodes", pts)
        if len(set(pts)) != len(pts):
            raise ValueError("nodes must be pairwise distinct")
        if len(pts) != comb(self.degree + 2, 2):
            raise SizeMismatch(
                f"degree {self.degree} needs {comb(self.degree + 2, 2)} nodes, got {len(pts)}"
            )
        worst = max((m.bit_count() for m in self.line_masks.values()), default=0)
        if worst > self.degree + 1:
            raise TooManyCollinear(
                f"a line carries {worst} nodes, more than n+1 = {self.degree + 1}"
            )

    @classmethod
    def from_points(cls, points: Iterable[Point], provenance: Provenance | None = None) -> NodeSet:
        pts = tuple(points)
        return cls(degree_for_size(len(pts)), pts, provenance)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NodeSet):
            return NotImplemented
        return self.degree == other.degree and self.nodes == other.nodes

    def __hash__(self) -> int:
        return hash((self.degree, self.nodes))

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __contains__(self, p: object) -> bool:
        return p in self.node_index

    @cached_property
    def node_index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.nodes)}

    @cached_property
    def line_masks(self) -> dict[Line, int]:
        """Every line through at least two nodes, mapped to its node bitmask."""
        pts = self.nodes
        masks: dict[Line, int] = {}
        covered = [0] * len(pts)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if covered[i] >> j & 1:
                    continue
                line = line_through(pts[i], pts[j])
                m = 0
                for k, p in enumerate(pts):
                    if incident(line, p):
                        m |= 1 << k
                masks[line] = m
                for k in _bits(m):
                    covered[k] |= m
        return dict(sorted(masks.items()))

    @cached_property
    def context(self) -> GCContext:
        """Shared analysis cache for this set."""
        return GCContext(self)

    def without(self, points: Iterable[Point]) -> NodeSet:
        drop = set(points)
        return NodeSet.from_points(p for p in self.nodes if p not in drop)


NodeSetLike = Union[NodeSet, "GCContext"]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class FundamentalFactorization:
    node: Point
    scalar: Fraction
    lines: tuple[Line, ...]

    def expand(self) -> BivarPoly:
        p = BivarPoly.constant(self.scalar)
        for line in self.lines:
            p = mul_line(p, line)
        return p

    def to_json(self) -> dict:
        from .geom import rat_to_str

        return {"node": self.node.to_json(), "scalar": rat_to_str(self.scalar),
                "lines": [l.to_json() for l in self.lines]}


@dataclass(frozen=True)
class LineProfile:
    """Incidence census of a line: node count and its 0m/1m/2m breakdown."""

    line: Line
    node_count: int
    zero_m: int
    one_m: int
    two_m: int

    @property
    def type(self) -> tuple[int, int, int]:
        return (self.zero_m, self.one_m, self.two_m)


@dataclass(frozen=True)
class AnalysisReport:
    maximal_lines: tuple[Line, ...]
    defect: int
    node_classes: Mapping[Point, int]
    n_correct: bool
    is_gc: bool

    def to_json(self) -> dict:
        return {
            "maximal_lines": [l.to_json() for l in self.maximal_lines],
            "defect": self.defect,
            "node_classes": [[*p.to_json(), f"{k}m"] for p, k in self.node_classes.items()],
            "n_correct": self.n_correct,
            "is_gc": self.is_gc,
        }


class GCContext:
    """Caches derived data for one node set.  Not thread-safe while filling."""

    def __init__(self, X: NodeSet):
        self.X = X
        self.n = X.degree
        self.N = len(X.nodes)
        self.full = (1 << self.N) - 1
        self.masks = X.line_masks
        self._fundamentals: dict[int, BivarPoly] = {}
        self._factorizations: dict[tuple[int, str], FundamentalFactorization | NotFullyFactorable] = {}
        self._users: dict[Line, int] = {}
        self._columns: dict[int, tuple[int, dict]] = {}
        self._subsets: dict[int, GCContext] = {}
        self.cache: dict[Any, Any] = {}

    # -- node and subset helpers -------------------------------------------

    @property
    def nodes(self) -> tuple[Point, ...]:
        return self.X.nodes

    def index(self, p: Point) -> int:
        try:
            return self.X.node_index[p]
        except KeyError:
            raise NodeAbsent(p) from None

    def points(self, mask: int) -> list[Point]:
        return [self.X.nodes[i] for i in _bits(mask)]

    def mask_of(self, points: Iterable[Point]) -> int:
        m = 0
        for p in points:
            m |= 1 << self.index(p)
        return m

    def line_mask(self, line: Line) -> int:
        m = self.masks.get(line)
        if m is not None:
            return m
        m = 0
        for k, p in enumerate(self.X.nodes):
            if incident(line, p):
                m |= 1 << k
        return m

    def subset_degree(self, S: int) -> int:
        return degree_for_size(S.bit_count())

    def maximal_lines_in(self, S: int | None = None) -> list[Line]:
        """Maximal lines of the subset ``S`` (default: whole set), sorted."""
        if S is None:
            S = self.full
        key = ("maximal", S)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        m = self.subset_degree(S)
        out = []
        if m >= 1:
            for line, mask in self.masks.items():
                c = (mask & S).bit_count()
                if c == m + 1:
                    out.append(line)
                elif c > m + 1:
                    raise TooManyCollinear(f"{line} carries {c} nodes of a degree-{m} subset")
        self.cache[key] = out
        return out

    def node_class_counts(self, S: int | None = None) -> dict[int, int]:
        """Node index -> number of maximal lines of ``S`` through it."""
        if S is None:
            S = self.full
        counts = {i: 0 for i in _bits(S)}
        for line in self.maximal_lines_in(S):
            for i in _bits(self.masks[line] & S):
                counts[i] += 1
        return counts

    def two_m_mask(self, S: int | None = None) -> int:
        return sum(1 << i for i, c in self.node_class_counts(S).items() if c >= 2)

    def subcontext(self, S: int) -> GCContext:
        """Context for the subset ``S`` as a standalone node set."""
        sub = self._subsets.get(S)
        if sub is None:
            sub = GCContext(NodeSet.from_points(self.points(S)))
            self._subsets[S] = sub
        return sub

    # -- interpolation -------------------------------------------------------

    @cached_property
    def basis(self) -> InterpolationBasis:
        return interpolation_basis(self.X.nodes, self.n)

    @cached_property
    def n_correct(self) -> bool:
        try:
            self.basis
        except NotCorrect:
            return False
        return True

    def _column(self, a: int) -> tuple[int, dict[tuple[int, int], int]]:
        """``(g, q)``: content and primitive integer form of node ``a``'s column."""
        hit = self._columns.get(a)
        if hit is None:
            hit = primitive_part(self.basis.integer_column(a))
            self._columns[a] = hit
        return hit

    def fundamental(self, a: int) -> BivarPoly:
        p = self._fundamentals.get(a)
        if p is None:
            p = self.basis.polynomial(a)
            self._fundamentals[a] = p
        return p

    @cached_property
    def _modular(self) -> tuple[int, np.ndarray] | None:
        for q in _PRIMES:
            coeffs = self.basis.modular_coefficients(q)
            if coeffs is not None:
                return q, np.array(coeffs, dtype=np.int64)
        return None

    def _monomial_vector(self, line: Line, q: int) -> list[int]:
        a, b, c = line.a % q, line.b % q, line.c % q
        if b:
            x = _T0
            y = (-(a * x + c)) * pow(b, -1, q) % q
        else:
            x = (-c) * pow(a, -1, q) % q
            y = _T0
        xs, ys = [1], [1]
        for _ in range(self.n):
            xs.append(xs[-1] * x % q)
            ys.append(ys[-1] * y % q)
        return [xs[i] * ys[j] % q for i, j in monomials(self.n)]

    def _candidate_masks(self, lines: Sequence[Line]) -> list[int]:
        """For each line, a superset of the nodes whose fundamental polynomial it
        divides.  A nonzero value of ``p_A(gamma(t0)) mod q`` proves that the
        line does not divide ``p_A``; zeros still need exact confirmation."""
        mod = self._modular
        if mod is None:
            return [self.full] * len(lines)
        q, C = mod
        M = np.array([self._monomial_vector(l, q) for l in lines], dtype=np.int64)
        vals = (M @ C) % q
        out = []
        for row in vals == 0:
            m = 0
            for k in np.flatnonzero(row):
                m |= 1 << int(k)
            out.append(m)
        return out

    @cached_property
    def _pair_line_candidates(self) -> dict[Line, int]:
        lines = list(self.masks)
        return dict(zip(lines, self._candidate_masks(lines)))

    def divides(self, line: Line, a: int) -> bool:
        """Exact test: does ``line`` divide the fundamental polynomial of node ``a``?"""
        return int_restrict_vanishes(self._column(a)[1], self.n, line)

    def users_bruteforce(self, line: Line) -> int:
        """Bitmask of nodes whose fundamental polynomial is divisible by ``line``."""
        hit = self._users.get(line)
        if hit is not None:
            return hit
        cand = self._pair_line_candidates.get(line)
        if cand is None:
            cand = self._candidate_masks([line])[0]
        m = 0
        for a in _bits(cand):
            if self.divides(line, a):
                m |= 1 << a
        self._users[line] = m
        return m

    # -- factorization -------------------------------------------------------

    def factorization(self, a: int, order: str = "canonical") -> FundamentalFactorization:
        key = (a, order)
        hit = self._factorizations.get(key)
        if hit is None:
            try:
                hit = self._peel(a, order)
            except NotFullyFactorable as exc:
                hit = exc
            self._factorizations[key] = hit
        if isinstance(hit, NotFullyFactorable):
            raise hit
        return hit

    def _peel(self, a: int, order: str) -> FundamentalFactorization:
        bit = 1 << a
        lines = [l for l, m in self.masks.items() if (m & ~bit).bit_count() >= 2]
        if order == "reversed":
            lines.reverse()
        elif order != "canonical":
            raise ValueError(f"unknown peel order {order!r}")
        cand = self._pair_line_candidates
        g, cur = self._column(a)
        deg = self.n
        peeled: list[Line] = []
        for line in lines:
            if deg == 0:
                break
            if not cand[line] & bit:
                continue
            while deg > 0 and int_restrict_vanishes(cur, deg, line):
                cur = int_divide_by_line(cur, line)
                deg -= 1
                peeled.append(line)
        node = self.X.nodes[a]
        factor = Fraction(g * self.basis.scales[a], self.basis.pivot)
        if deg == 0:
            return FundamentalFactorization(node, cur.get((0, 0), 0) * factor, tuple(sorted(peeled)))
        residual = BivarPoly(deg, {e: v * factor for e, v in cur.items()})
        raise NotFullyFactorable(node, tuple(peeled), residual, _residual_diagnostics(self, a, residual))

    def gc_failures(self) -> list[NotFullyFactorable]:
        out = []
        for a in range(self.N):
            try:
                self.factorization(a)
            except NotFullyFactorable as exc:
                out.append(exc)
        return out

    @cached_property
    def is_gc(self) -> bool:
        return self.n_correct and not self.gc_failures()


def _residual_diagnostics(ctx: GCContext, a: int, residual: BivarPoly) -> dict:
    """Linear factors of a leftover residual over Q (diagnostic path only) and
    the nodes the peeled lines failed to cover."""
    import sympy

    x, y = sympy.symbols("x y")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i * y**j
               for (i, j), c in residual.coeffs.items())
    linear = []
    if residual.total_degree() > 0:
        _, factors = sympy.factor_list(sympy.expand(expr), x, y)
        for f, mult in factors:
            poly = sympy.Poly(f, x, y)
            if poly.total_degree() == 1:
                linear.append({"factor": str(f), "multiplicity": int(mult)})
    p = ctx.fundamental(a)
    return {
        "residual_degree": residual.total_degree(),
        "residual_linear_factors": linear,
        "nonvanishing_nodes": [q.to_json() for i, q in enumerate(ctx.nodes)
                               if i != a and p(q) != 0],
    }


def as_context(X: NodeSetLike) -> GCContext:
    return X if isinstance(X, GCContext) else X.context


# -- public operations -------------------------------------------------------


def maximal_lines(X: NodeSetLike) -> list[Line]:
    return list(as_context(X).maximal_lines_in())


def node_classes(X: NodeSetLike) -> dict[Point, int]:
    ctx = as_context(X)
    return {ctx.nodes[i]: k for i, k in ctx.node_class_counts().items()}


def defect(X: NodeSetLike) -> int:
    ctx = as_context(X)
    return ctx.n + 2 - len(ctx.maximal_lines_in())


def line_profile(X: NodeSetLike, line: Line) -> LineProfile:
    ctx = as_context(X)
    counts = ctx.node_class_counts()
    on = _bits(ctx.line_mask(line))
    tally = [0, 0, 0]
    for i in on:
        tally[min(counts[i], 2)] += 1
    return LineProfile(line, len(on), *tally)


def factor_fundamental(X: NodeSetLike, A: Point, order: str = "canonical") -> FundamentalFactorization:
    """Peel line factors off the fundamental polynomial of ``A``.

    Candidates are the lines through at least two nodes of ``X`` other than
    ``A``, tried in canonical order (or reversed).  Raises
    ``NotFullyFactorable`` if a nonconstant residual remains.
    """
    ctx = as_context(X)
    a = ctx.index(A)
    if not ctx.n_correct:
        raise NotCorrect("node set is not n-correct")
    return ctx.factorization(a, order)


def is_gc(X: NodeSetLike) -> bool:
    ctx = as_context(X)
    if not ctx.n_correct:
        return False
    failures = ctx.gc_failures()
    for exc in failures:
        log.info("node %s is not GC-decomposable: %s", exc.node, exc.diagnostics)
    return not failures


def analyze(X: NodeSetLike) -> AnalysisReport:
    ctx = as_context(X)
    lines = tuple(ctx.maximal_lines_in())
    return AnalysisReport(
        maximal_lines=lines,
        defect=ctx.n + 2 - len(lines),
        node_classes=node_classes(ctx),
        n_correct=ctx.n_correct,
        is_gc=is_gc(ctx),
    )
