"""Seeded, exact builders for the five known families of GC_n sets.

* ``chung_yao``       defect 0: all intersections of n+2 lines in general position
* ``carnicer_gasca``  defect 1: n+1 lines plus one extra node on each
* ``defect_two``      n lines, a center O and three concurrent O-lines
* ``defect_three``    n-1 lines, D-nodes, O-nodes and the OO/DD-lines
* ``principal_lattice`` defect n-1: affine images of the triangular lattice

Random choices come from a counter-based generator (numpy's Philox) seeded per
call, so a given ``(n, seed)`` always yields the same node set.  Degenerate
draws are rejected with exact predicates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence, TypeVar

import numpy as np

from .errors import CharacterizationViolated, GenerationFailed, SingularTransform, GCError
from .gcset import NodeSet, Provenance
from .geom import Line, Point, canonical_line, collinear, incident, intersect, line_through, parametrize, rat

DEFAULT_BOUND = 50
DEFAULT_RETRIES = 10_000

FAMILIES = ("chung-yao", "carnicer-gasca", "defect-2", "defect-3", "principal")
MIN_DEGREE = {"chung-yao": 1, "carnicer-gasca": 2, "defect-2": 3, "defect-3": 4, "principal": 1}

T = TypeVar("T")


@dataclass(frozen=True)
class GeneralPositionLines:
    lines: tuple[Line, ...]
    seed: int

    def intersections(self) -> list[Point]:
        return [intersect(a, b) for a, b in combinations(self.lines, 2)]


@dataclass(frozen=True)
class CarnicerGascaSpec:
    maximal_seed_lines: GeneralPositionLines
    extra_nodes: tuple[Point, ...]


@dataclass(frozen=True)
class Defect2Spec:
    maximal_seed_lines: GeneralPositionLines
    center: Point
    o_lines: tuple[Line, Line, Line]
    drop_choice: tuple[int, ...]  # per maximal line: index of the O-line meeting it outside X

    def kept(self) -> list[list[tuple[int, Point]]]:
        """Per maximal line, the kept (O-line index, node) pairs."""
        out = []
        for lam, drop in zip(self.maximal_seed_lines.lines, self.drop_choice):
            out.append([(m, intersect(lam, o)) for m, o in enumerate(self.o_lines) if m != drop])
        return out


@dataclass(frozen=True)
class Defect3Spec:
    maximal_seed_lines: GeneralPositionLines
    d_nodes: tuple[Point, Point, Point]
    o_nodes: tuple[Point, Point, Point]

    @property
    def oo_lines(self) -> tuple[Line, Line, Line]:
        """``oo_lines[i]`` passes through the two O-nodes other than ``o_nodes[i]``."""
        o = self.o_nodes
        return (line_through(o[1], o[2]), line_through(o[0], o[2]), line_through(o[0], o[1]))

    @property
    def dd_lines(self) -> tuple[Line, Line, Line]:
        """``dd_lines[i]`` passes through ``o_nodes[i]`` and the other two D-nodes."""
        d = self.d_nodes
        return (line_through(d[1], d[2]), line_through(d[0], d[2]), line_through(d[0], d[1]))

    def one_m_nodes(self) -> list[list[Point]]:
        """Per maximal line, its three non-intersection nodes."""
        lams = self.maximal_seed_lines.lines
        oo = self.oo_lines
        out = []
        for i, lam in enumerate(lams):
            pts = [self.d_nodes[i]] if i < 3 else []
            pts += [intersect(lam, oo[j]) for j in range(3) if j != i]
            out.append(pts)
        return out


@dataclass(frozen=True)
class GplSpec:
    """Three families of n+1 lines; ``families[r][i]`` is the i-th line of family r.
    ``transform`` is ``((a, b), (c, d)), (e, f)`` for ``p -> M p + t``."""

    families: tuple[tuple[Line, ...], tuple[Line, ...], tuple[Line, ...]]
    transform: tuple[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]], tuple[Fraction, Fraction]]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def _retry(build: Callable[[], T], retries: int, what: str) -> T:
    last = None
    for _ in range(retries):
        try:
            return build()
        except _Reject as exc:
            last = exc
    raise GenerationFailed(f"{what}: no valid draw after {retries} attempts ({last})")


class _Reject(Exception):
    """Internal: the current random draw is degenerate."""


def _draw_int(rng: np.random.Generator, bound: int) -> int:
    return int(rng.integers(-bound, bound + 1))


def _random_line(rng: np.random.Generator, bound: int) -> Line:
    while True:
        a, b, c = (_draw_int(rng, bound) for _ in range(3))
        if a or b:
            return canonical_line(a, b, c)


def _random_rat(rng: np.random.Generator, bound: int) -> Fraction:
    den = int(rng.integers(1, 4))
    return Fraction(_draw_int(rng, bound * den), den)


def _random_point(rng: np.random.Generator, bound: int) -> Point:
    return Point(_random_rat(rng, bound), _random_rat(rng, bound))


def _random_point_on(line: Line, rng: np.random.Generator, bound: int) -> Point:
    return parametrize(line, _random_rat(rng, bound))


def _line_through_with_direction(p: Point, rng: np.random.Generator, bound: int) -> Line:
    while True:
        a, b = _draw_int(rng, bound), _draw_int(rng, bound)
        if a or b:
            return canonical_line(a, b, -(a * p.x + b * p.y))


def general_position_lines(count: int, seed: int, bound: int = DEFAULT_BOUND,
                           retries: int = DEFAULT_RETRIES,
                           rng: np.random.Generator | None = None) -> GeneralPositionLines:
    """``count`` lines, no two parallel and no three concurrent."""
    rng = rng if rng is not None else make_rng(seed)
    lines: list[Line] = []
    points: list[Point] = []
    for _ in range(retries):
        if len(lines) == count:
            break
        cand = _random_line(rng, bound)
        if any(intersect(cand, l) is None for l in lines):
            continue
        if any(incident(cand, p) for p in points):
            continue
        points += [intersect(cand, l) for l in lines]
        lines.append(cand)
    if len(lines) < count:
        raise GenerationFailed(f"could not place {count} lines in general position")
    return GeneralPositionLines(tuple(lines), seed)


def _require_degree(family: str, n: int) -> None:
    if n < MIN_DEGREE[family]:
        raise ValueError(f"{family} needs degree >= {MIN_DEGREE[family]}, got {n}")


def _finish(points: Sequence[Point], n: int, prov: Provenance, expect_maximal: int,
            check_correct: bool) -> NodeSet:
    try:
        X = NodeSet(n, tuple(points), prov)
    except (ValueError, GCError) as exc:
        raise _Reject(str(exc)) from None
    ctx = X.context
    if len(ctx.maximal_lines_in()) != expect_maximal:
        raise _Reject(f"found {len(ctx.maximal_lines_in())} maximal lines, expected {expect_maximal}")
    if check_correct and not ctx.n_correct:
        raise CharacterizationViolated("constructed set is not n-correct")
    return X


# -- defect 0 -----------------------------------------------------------------


def chung_yao(n: int, seed: int, bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> NodeSet:
    _require_degree("chung-yao", n)
    gpl = general_position_lines(n + 2, seed, bound, retries)
    prov = Provenance("chung-yao", n, seed, gpl)
    return NodeSet(n, tuple(gpl.intersections()), prov)


# -- defect 1 -----------------------------------------------------------------


def carnicer_gasca(n: int, seed: int, bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> NodeSet:
    _require_degree("carnicer-gasca", n)
    rng = make_rng(seed)
    gpl = general_position_lines(n + 1, seed, bound, retries, rng=rng)
    inner = gpl.intersections()

    def build() -> NodeSet:
        extras = []
        for lam in gpl.lines:
            p = _random_point_on(lam, rng, bound)
            if any(incident(l, p) for l in gpl.lines if l != lam) or p in extras:
                raise _Reject("extra node on a second line")
            extras.append(p)
        if all(collinear(extras[0], extras[1], p) for p in extras[2:]):
            raise _Reject("extra nodes are collinear")
        prov = Provenance("carnicer-gasca", n, seed, CarnicerGascaSpec(gpl, tuple(extras)))
        return _finish(inner + extras, n, prov, n + 1, check_correct=False)

    return _retry(build, retries, "carnicer_gasca")


# -- defect 2 -----------------------------------------------------------------


def default_drop_choice(lines: Sequence[Line], o_lines: Sequence[Line]) -> tuple[int, ...]:
    """Per maximal line, the O-line whose intersection is left out of the set.

    Every O-line must lose at least one intersection, otherwise it would carry
    n+1 nodes.  When that constraint binds the drop comes from an O-line that
    has not lost one yet; otherwise the canonically smallest point is dropped.
    """
    n = len(lines)
    dropped = [0, 0, 0]
    choice = []
    for i, lam in enumerate(lines):
        pts = [(intersect(lam, o), m) for m, o in enumerate(o_lines)]
        untouched = [m for m in range(3) if dropped[m] == 0]
        pool = pts
        if len(untouched) >= n - i:
            pool = [(p, m) for p, m in pts if m in untouched]
        _, m = min(pool)
        dropped[m] += 1
        choice.append(m)
    return tuple(choice)


def defect_two_points(spec: Defect2Spec) -> list[Point]:
    pts = list(spec.maximal_seed_lines.intersections())
    for kept in spec.kept():
        pts += [p for _, p in kept]
    pts.append(spec.center)
    return pts


def validate_defect_two(n: int, spec: Defect2Spec) -> list[str]:
    """Violated clauses of the defect-2 characterization (empty when valid)."""
    lams = spec.maximal_seed_lines.lines
    problems = []
    if len(lams) != n:
        problems.append(f"need {n} maximal seed lines")
    if any(incident(l, spec.center) for l in lams):
        problems.append("center lies on a maximal seed line")
    if len(set(spec.o_lines)) != 3 or not all(incident(o, spec.center) for o in spec.o_lines):
        problems.append("O-lines are not three distinct lines concurrent at the center")
    if any(intersect(l, o) is None for l in lams for o in spec.o_lines):
        problems.append("an O-line is parallel to a maximal seed line")
        return problems
    pts = defect_two_points(spec)
    if len(set(pts)) != len(pts):
        problems.append("constructed nodes are not distinct")
        return problems
    inner = set(spec.maximal_seed_lines.intersections())
    for lam, kept in zip(lams, spec.kept()):
        if any(p in inner for _, p in kept):
            problems.append(f"a kept O-line intersection on {lam} is a 2m-node")
    for m, o in enumerate(spec.o_lines):
        on = sum(incident(o, p) for p in pts)
        if on >= n + 1:
            problems.append(f"O-line {m} carries {on} >= n+1 nodes")
    return problems


def defect_two_from_spec(n: int, spec: Defect2Spec, seed: int | None = None) -> NodeSet:
    problems = validate_defect_two(n, spec)
    if problems:
        raise CharacterizationViolated("; ".join(problems))
    prov = Provenance("defect-2", n, seed, spec)
    try:
        return _finish(defect_two_points(spec), n, prov, n, check_correct=True)
    except _Reject as exc:
        raise CharacterizationViolated(str(exc)) from None


def defect_two(n: int, seed: int, bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES,
               drop_choice: Sequence[int] | None = None) -> NodeSet:
    _require_degree("defect-2", n)
    rng = make_rng(seed)
    gpl = general_position_lines(n, seed, bound, retries, rng=rng)
    inner = gpl.intersections()

    def build() -> NodeSet:
        center = _random_point(rng, bound)
        if any(incident(l, center) for l in gpl.lines):
            raise _Reject("center on a seed line")
        o_lines = []
        while len(o_lines) < 3:
            o = _line_through_with_direction(center, rng, bound)
            if o in o_lines or any(intersect(o, l) is None for l in gpl.lines):
                continue
            if any(incident(o, p) for p in inner):
                continue
            o_lines.append(o)
        drop = tuple(drop_choice) if drop_choice is not None else default_drop_choice(gpl.lines, o_lines)
        spec = Defect2Spec(gpl, center, tuple(o_lines), drop)
        problems = validate_defect_two(n, spec)
        if problems:
            raise _Reject("; ".join(problems))
        prov = Provenance("defect-2", n, seed, spec)
        return _finish(defect_two_points(spec), n, prov, n, check_correct=True)

    return _retry(build, retries, "defect_two")


# -- defect 3 -----------------------------------------------------------------


def defect_three_points(spec: Defect3Spec) -> list[Point]:
    pts = list(spec.maximal_seed_lines.intersections())
    for ones in spec.one_m_nodes():
        pts += ones
    pts += list(spec.o_nodes)
    return pts


def validate_defect_three(n: int, spec: Defect3Spec) -> list[str]:
    """Violated clauses of the defect-3 characterization (empty when valid)."""
    lams = spec.maximal_seed_lines.lines
    D, O = spec.d_nodes, spec.o_nodes
    problems = []
    if len(lams) != n - 1:
        return [f"need {n - 1} maximal seed lines"]
    if collinear(*O):
        return ["O-nodes are collinear"]
    if any(incident(l, o) for l in lams for o in O):
        problems.append("an O-node lies on a maximal seed line")
    for i in range(3):
        if not incident(lams[i], D[i]):
            problems.append(f"D-node {i} is not on its maximal line")
    oo = spec.oo_lines
    if any(intersect(l, o) is None for l in lams for o in oo):
        return problems + ["an OO-line is parallel to a maximal seed line"]
    pts = defect_three_points(spec)
    if len(set(pts)) != len(pts):
        return problems + ["constructed nodes are not distinct"]
    inner = set(spec.maximal_seed_lines.intersections())
    ones = [p for row in spec.one_m_nodes() for p in row]
    if any(p in inner for p in ones):
        problems.append("a 1m-node candidate coincides with a 2m-node")
    # clause (i): the nodes of X^(1) off the OO-lines are exactly the D-nodes
    off = {p for p in ones if not any(incident(o, p) for o in oo)}
    if off != set(D):
        problems.append("X^(1) minus the OO-lines is not {D1, D2, D3}")
    # clause (ii): each OO-line has exactly n nodes, n-2 of them 1m, and misses lambda_i
    X = set(pts)
    for i, o in enumerate(oo):
        on = [p for p in pts if incident(o, p)]
        n_o = sum(p in O for p in on)
        n_one = sum(p in ones for p in on)
        if len(on) != n or n_o != 2 or n_one != n - 2:
            problems.append(f"OO-line {i} has {len(on)} nodes ({n_o} O, {n_one} 1m), expected n={n}")
        if intersect(o, lams[i]) in X:
            problems.append(f"OO-line {i} meets maximal line {i} at a node")
    # clause (iii): O_i, D_j, D_k collinear
    for i in range(3):
        j, k = [t for t in range(3) if t != i]
        if not collinear(O[i], D[j], D[k]):
            problems.append(f"O{i}, D{j}, D{k} are not collinear")
    return problems


def defect_three_from_spec(n: int, spec: Defect3Spec, seed: int | None = None) -> NodeSet:
    problems = validate_defect_three(n, spec)
    if problems:
        raise CharacterizationViolated("; ".join(problems))
    prov = Provenance("defect-3", n, seed, spec)
    try:
        return _finish(defect_three_points(spec), n, prov, n - 1, check_correct=True)
    except _Reject as exc:
        raise CharacterizationViolated(str(exc)) from None


def defect_three(n: int, seed: int, bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> NodeSet:
    _require_degree("defect-3", n)
    rng = make_rng(seed)
    gpl = general_position_lines(n - 1, seed, bound, retries, rng=rng)
    lams = gpl.lines

    def build() -> NodeSet:
        D = []
        for i in range(3):
            p = _random_point_on(lams[i], rng, bound)
            if any(incident(l, p) for l in lams if l != lams[i]):
                raise _Reject("D-node on a second seed line")
            D.append(p)
        O = []
        for i in range(3):
            j, k = [t for t in range(3) if t != i]
            o = _random_point_on(line_through(D[j], D[k]), rng, bound)
            if o in D:
                raise _Reject("O-node coincides with a D-node")
            O.append(o)
        spec = Defect3Spec(gpl, tuple(D), tuple(O))
        problems = validate_defect_three(n, spec)
        if problems:
            raise _Reject("; ".join(problems))
        prov = Provenance("defect-3", n, seed, spec)
        return _finish(defect_three_points(spec), n, prov, n - 1, check_correct=True)

    return _retry(build, retries, "defect_three")


# -- defect n-1 ---------------------------------------------------------------

IDENTITY = (((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))), (Fraction(0), Fraction(0)))


def _normalize_transform(transform):
    if transform is None:
        return IDENTITY
    (m, t) = transform
    ((a, b), (c, d)) = m
    return (((rat(a), rat(b)), (rat(c), rat(d))), (rat(t[0]), rat(t[1])))


def _transform_point(tr, p: Point) -> Point:
    ((a, b), (c, d)), (e, f) = tr
    return Point(a * p.x + b * p.y + e, c * p.x + d * p.y + f)


def _transform_line(tr, line: Line) -> Line:
    # image of {a x + b y + c = 0} under p -> M p + t is (a, b) M^{-1} (p' - t) + c = 0
    ((m11, m12), (m21, m22)), (e, f) = tr
    det = m11 * m22 - m12 * m21
    i11, i12, i21, i22 = m22 / det, -m12 / det, -m21 / det, m11 / det
    na = line.a * i11 + line.b * i21
    nb = line.a * i12 + line.b * i22
    nc = line.c - (na * e + nb * f)
    return canonical_line(na, nb, nc)


def principal_lattice(n: int, transform=None) -> NodeSet:
    """Affine image of ``{(i, j) : i, j >= 0, i + j <= n}``.

    ``transform`` is ``(((a, b), (c, d)), (e, f))`` mapping ``p`` to ``M p + t``.
    """
    _require_degree("principal", n)
    tr = _normalize_transform(transform)
    ((a, b), (c, d)), _ = tr
    if a * d - b * c == 0:
        raise SingularTransform("affine map must be invertible")
    pts = [_transform_point(tr, Point(i, j)) for i in range(n + 1) for j in range(n + 1 - i)]
    fam0 = tuple(_transform_line(tr, canonical_line(1, 0, -i)) for i in range(n + 1))
    fam1 = tuple(_transform_line(tr, canonical_line(0, 1, -j)) for j in range(n + 1))
    fam2 = tuple(_transform_line(tr, canonical_line(1, 1, -(n - k))) for k in range(n + 1))
    prov = Provenance("principal", n, None, GplSpec((fam0, fam1, fam2), tr))
    return NodeSet(n, tuple(pts), prov)


def random_affine(seed: int, bound: int = 9):
    """Seeded invertible integer affine map in the ``transform`` format."""
    rng = make_rng(seed)
    while True:
        a, b, c, d, e, f = (_draw_int(rng, bound) for _ in range(6))
        if a * d - b * c != 0:
            return (((Fraction(a), Fraction(b)), (Fraction(c), Fraction(d))), (Fraction(e), Fraction(f)))


def generate(family: str, n: int, seed: int = 0, **kwargs) -> NodeSet:
    """Dispatch by CLI family name."""
    if family == "chung-yao":
        return chung_yao(n, seed, **kwargs)
    if family == "carnicer-gasca":
        return carnicer_gasca(n, seed, **kwargs)
    if family == "defect-2":
        return defect_two(n, seed, **kwargs)
    if family == "defect-3":
        return defect_three(n, seed, **kwargs)
    if family == "principal":
        return principal_lattice(n, **kwargs)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
