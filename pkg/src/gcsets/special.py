"""Hand-placed defect-2 and defect-3 sets whose lines carry hat-2m nodes.

Random family instances almost never put a 1m-node on the crossing of an
O-line (or OO-line) with a used line, so the lines with nonzero ``r_hat`` are
built here by forcing one maximal line, or one O-node, through that crossing.
Each builder returns the node set and the line of interest.
"""

from __future__ import annotations

from itertools import combinations

from .constructors import (
    DEFAULT_BOUND,
    DEFAULT_RETRIES,
    Defect2Spec,
    Defect3Spec,
    GeneralPositionLines,
    _line_through_with_direction,
    _random_line,
    _random_point,
    _random_point_on,
    _Reject,
    _retry,
    defect_three_from_spec,
    defect_two_from_spec,
    make_rng,
)
from .errors import CharacterizationViolated
from .gcset import NodeSet
from .geom import Line, Point, incident, intersect, line_through
from .usage import defect_three_l_i_j, defect_three_l_ij, defect_two_l_ij

DEFECT3_CASES = ("dd", "l-ij", "l-i-j", "l-i-j-two")


def _fits(lines: list[Line], cand: Line) -> bool:
    if cand in lines or any(intersect(cand, l) is None for l in lines):
        return False
    pts = [intersect(a, b) for a, b in combinations(lines, 2)]
    return not any(incident(cand, p) for p in pts)


def _add_random(lines: list[Line], rng, bound: int) -> None:
    for _ in range(100):
        cand = _random_line(rng, bound)
        if _fits(lines, cand):
            lines.append(cand)
            return
    raise _Reject("no general-position line found")


def _add_through(lines: list[Line], p: Point | None, rng, bound: int) -> None:
    if p is None:
        raise _Reject("forced point does not exist")
    for _ in range(100):
        cand = _line_through_with_direction(p, rng, bound)
        if _fits(lines, cand):
            lines.append(cand)
            return
    raise _Reject("no general-position line through the forced point")


def defect_two_hat(n: int, seed: int, bound: int = DEFAULT_BOUND,
                   retries: int = DEFAULT_RETRIES) -> tuple[NodeSet, Line]:
    """Defect-2 set in which the crossing S of l_12 with the shared O-line is
    a node of a third maximal line, so S is a hat-2m node of l_12 (n >= 4)."""
    if n < 4:
        raise ValueError("needs n >= 4: the shared O-line must lose a node elsewhere")
    rng = make_rng(seed)

    def build():
        lines: list[Line] = []
        _add_random(lines, rng, bound)
        _add_random(lines, rng, bound)
        center = _random_point(rng, bound)
        o_lines: list[Line] = []
        while len(o_lines) < 3:
            o = _line_through_with_direction(center, rng, bound)
            if o not in o_lines:
                o_lines.append(o)
        # lambda_1 keeps O-lines 1, 2; lambda_2 keeps 0, 2; O-line 2 is shared
        l12 = line_through(intersect(lines[0], o_lines[1]), intersect(lines[1], o_lines[0]))
        S = intersect(o_lines[2], l12)
        _add_through(lines, S, rng, bound)
        drop = [0, 1, int(rng.integers(0, 2)), 2]
        while len(lines) < n:
            _add_random(lines, rng, bound)
        drop += [int(rng.integers(0, 3)) for _ in range(n - len(drop))]
        if any(incident(o, p) for o in o_lines for p in GeneralPositionLines(tuple(lines), seed).intersections()):
            raise _Reject("an O-line passes through a 2m-node")
        spec = Defect2Spec(GeneralPositionLines(tuple(lines), seed), center, tuple(o_lines), tuple(drop[:n]))
        try:
            X = defect_two_from_spec(n, spec, seed)
        except (CharacterizationViolated, ValueError) as exc:
            raise _Reject(str(exc)) from None
        return X, defect_two_l_ij(spec)[(0, 1)]

    return _retry(build, retries, "defect_two_hat")


def defect_three_hat(n: int, seed: int, case: str, bound: int = DEFAULT_BOUND,
                     retries: int = DEFAULT_RETRIES) -> tuple[NodeSet, Line]:
    """Defect-3 set with hat-2m nodes on one used line.

    ``case`` picks the line: ``"dd"`` (DD-line 3, one hat node, n >= 5),
    ``"l-ij"`` (l_12, one hat node, n >= 5), ``"l-i-j"`` (l_3^4 with one hat
    node, n >= 5) or ``"l-i-j-two"`` (l_3^4 with two hat nodes, n >= 6)."""
    if case not in DEFECT3_CASES:
        raise ValueError(f"unknown case {case!r}; choose from {DEFECT3_CASES}")
    if n < (6 if case == "l-i-j-two" else 5):
        raise ValueError(f"case {case!r} needs a larger degree")
    rng = make_rng(seed)

    def build():
        lines: list[Line] = []
        for _ in range(3):
            _add_random(lines, rng, bound)
        D = [_random_point_on(lines[i], rng, bound) for i in range(3)]
        O = [None, None, None]
        O[0] = _random_point_on(line_through(D[1], D[2]), rng, bound)
        O[1] = _random_point_on(line_through(D[0], D[2]), rng, bound)
        oo3 = line_through(O[0], O[1])
        if case in ("l-i-j", "l-i-j-two"):
            _add_random(lines, rng, bound)
            ell = line_through(D[2], intersect(lines[3], oo3))
            S = intersect(ell, lines[1])
            O[2] = intersect(line_through(O[1], S), line_through(D[0], D[1]))
            if O[2] is None:
                raise _Reject("O_3 does not exist")
            if case == "l-i-j-two":
                _add_through(lines, intersect(line_through(O[0], O[2]), ell), rng, bound)
        else:
            O[2] = _random_point_on(line_through(D[0], D[1]), rng, bound)
            if case == "dd":
                S = intersect(line_through(O[0], O[1]), line_through(D[0], D[1]))
            else:
                oo1, oo2 = line_through(O[1], O[2]), line_through(O[0], O[2])
                ell = line_through(intersect(lines[0], oo2), intersect(lines[1], oo1))
                S = intersect(oo3, ell)
            _add_through(lines, S, rng, bound)
        while len(lines) < n - 1:
            _add_random(lines, rng, bound)
        spec = Defect3Spec(GeneralPositionLines(tuple(lines), seed), tuple(D), tuple(O))
        try:
            X = defect_three_from_spec(n, spec, seed)
        except (CharacterizationViolated, ValueError) as exc:
            raise _Reject(str(exc)) from None
        if case == "dd":
            line = spec.dd_lines[2]
        elif case == "l-ij":
            line = defect_three_l_ij(spec)[(0, 1)]
        else:
            line = defect_three_l_i_j(spec)[(2, 3)]
        return X, line

    return _retry(build, retries, f"defect_three_hat[{case}]")
