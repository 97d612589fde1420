"""Which nodes use a line, computed two independent ways.

The brute-force route tests every fundamental polynomial for divisibility by
the line.  The pipeline route never looks at polynomials: it lowers the set
by removing the line-disjoint maximal lines and the line-adjoint pairs in one
step, then keeps applying single disjoint/adjoint reductions until the line
becomes maximal in what is left.  The users are the survivors off the line.
``used_nodes_pipeline`` runs both and raises ``OracleMismatch`` if they differ.

Internally every subset is an integer bitmask over the node indices of the
parent set, see :class:`gcsets.gcset.GCContext`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, isqrt

from .errors import NonTermination, OracleMismatch, TooFewNodes
from .gcset import GCContext, NodeSet, NodeSetLike, _bits, as_context
from .geom import Line, Point, intersect, line_through

MAXIMAL, PROPER, PROPER_MINUS, UNUSED = "maximal", "proper", "proper_minus", "unused"
PREFERENCES = ("disjoint-first", "adjoint-first")


@dataclass(frozen=True)
class ReductionStep:
    kind: str  # "disjoint" or "adjoint"
    lines: tuple[Line, ...]

    def to_json(self) -> dict:
        return {"kind": self.kind, "lines": [l.to_json() for l in self.lines]}


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]
    terminal: NodeSet

    @property
    def depth(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class LoweringResult:
    original: NodeSet
    line: Line
    lowered: NodeSet
    u1: tuple[Line, ...]
    u2: tuple[tuple[Line, Line], ...]


@dataclass(frozen=True)
class LineClassification:
    variant: str
    depth: int = 0
    trace: ReductionTrace | None = None
    hat_2m: tuple[Point, ...] = ()

    @property
    def label(self) -> str:
        if self.variant == PROPER_MINUS:
            return f"proper_minus_{self.depth}"
        return self.variant


@dataclass(frozen=True)
class UsageReport:
    line: Line
    k: int
    users: tuple[Point, ...]
    r: int
    r_hat: int
    s: int | None
    delta: int
    classification: LineClassification
    oracle_agrees: bool = True

    @property
    def label(self) -> str:
        return self.classification.label

    def to_json(self) -> dict:
        trace = self.classification.trace
        return {
            "line": self.line.to_json(),
            "k": self.k,
            "r": self.r,
            "r_hat": self.r_hat,
            "s": self.s,
            "delta": self.delta,
            "users": [p.to_json() for p in self.users],
            "class": self.label,
            "trace": [st.to_json() for st in trace.steps] if trace else [],
            "hat_2m": [p.to_json() for p in self.classification.hat_2m],
            "oracle_agrees": self.oracle_agrees,
        }


# -- mask-level machinery ------------------------------------------------------


@dataclass
class _Classified:
    variant: str
    k: int
    lowered: int = 0
    u1: tuple[Line, ...] = ()
    u2: tuple[tuple[Line, Line], ...] = ()
    steps: list[tuple[str, tuple[Line, ...], int]] = field(default_factory=list)
    terminal: int = 0
    hat: int = 0


def _on_line(ctx: GCContext, line: Line) -> int:
    return ctx.line_mask(line)


def _is_maximal_in(ctx: GCContext, S: int, lm: int) -> bool:
    return (lm & S).bit_count() == ctx.subset_degree(S) + 1


def _reductions(ctx: GCContext, S: int, lm: int) -> tuple[list[Line], list[tuple[Line, Line]]]:
    """Line-disjoint maximal lines and line-adjoint pairs of the subset ``S``.

    A maximal line counts as disjoint when it shares no node of ``S`` with the
    line, which covers the parallel case too."""
    M = ctx.maximal_lines_in(S)
    on = lm & S
    disjoint = [lam for lam in M if not ctx.masks[lam] & on]
    adjoint = []
    for lam1, lam2 in combinations(M, 2):
        if ctx.masks[lam1] & ctx.masks[lam2] & on:
            adjoint.append((lam1, lam2))
    return disjoint, adjoint


def _lower(ctx: GCContext, S: int, lm: int) -> tuple[int, list[Line], list[tuple[Line, Line]]]:
    if _is_maximal_in(ctx, S, lm):
        return S, [], []
    disjoint, adjoint = _reductions(ctx, S, lm)
    removed = 0
    for lam in disjoint:
        removed |= ctx.masks[lam]
    for pair in adjoint:
        removed |= ctx.masks[pair[0]] | ctx.masks[pair[1]]
    return S & ~removed, disjoint, adjoint


def _pick(disjoint, adjoint, preference: str):
    if preference == "disjoint-first":
        if disjoint:
            return "disjoint", (disjoint[0],)
        if adjoint:
            return "adjoint", adjoint[0]
    elif preference == "adjoint-first":
        if adjoint:
            return "adjoint", adjoint[-1]
        if disjoint:
            return "disjoint", (disjoint[-1],)
    else:
        raise ValueError(f"unknown preference {preference!r}; choose from {PREFERENCES}")
    return None


def _s_from_count(count: int) -> int | None:
    """The ``s`` with ``C(s, 2) == count``, or ``None`` if there is none."""
    s = (1 + isqrt(1 + 8 * count)) // 2
    return s if comb(s, 2) == count else None


def _classify(ctx: GCContext, line: Line, preference: str = "disjoint-first") -> _Classified:
    key = ("classify", line, preference)
    hit = ctx.cache.get(key)
    if hit is not None:
        return hit
    lm = _on_line(ctx, line)
    k = lm.bit_count()
    if k < 2:
        raise TooFewNodes(f"{line} passes through {k} node(s); at least 2 are needed")
    full = ctx.full
    if _is_maximal_in(ctx, full, lm):
        out = _Classified(MAXIMAL, k, lowered=full, terminal=full)
        ctx.cache[key] = out
        return out
    users = ctx.users_bruteforce(line)
    if not users:
        out = _Classified(UNUSED, k)
        ctx.cache[key] = out
        return out
    s = _s_from_count(users.bit_count())
    lowered, u1, u2 = _lower(ctx, full, lm)
    out = _Classified(PROPER, k, lowered=lowered, u1=tuple(u1), u2=tuple(u2))
    cur = lowered
    floor = (s - 1) if s is not None else 0
    while True:
        try:
            maximal_now = _is_maximal_in(ctx, cur, lm)
        except ValueError as exc:
            raise NonTermination(f"reduction of {line} left a non-triangular set: {exc}") from None
        if maximal_now:
            break
        disjoint, adjoint = _reductions(ctx, cur, lm)
        choice = _pick(disjoint, adjoint, preference)
        if choice is None:
            raise NonTermination(f"{line} is not maximal and no reduction applies")
        kind, lines = choice
        removed = 0
        for lam in lines:
            removed |= ctx.masks[lam]
        cur &= ~removed
        if ctx.subset_degree(cur) < floor:
            raise NonTermination(f"reducing {line} dropped below degree {floor}")
        out.steps.append((kind, tuple(lines), cur))
    out.terminal = cur
    if out.steps:
        out.variant = PROPER_MINUS
        counts = ctx.node_class_counts(lowered)
        out.hat = sum(1 << i for i in _bits(lm & lowered) if counts[i] == 2)
    ctx.cache[key] = out
    return out


def _two_m_on(ctx: GCContext, lm: int) -> int:
    counts = ctx.node_class_counts()
    return sum(1 for i in _bits(lm) if counts[i] >= 2)


def _subset_nodeset(ctx: GCContext, S: int) -> NodeSet:
    if S == ctx.full:
        return ctx.X
    return ctx.subcontext(S).X


# -- public operations -------------------------------------------------------


def used_nodes_bruteforce(X: NodeSetLike, line: Line) -> set[Point]:
    """Nodes whose fundamental polynomial is divisible by ``line``."""
    ctx = as_context(X)
    return set(ctx.points(ctx.users_bruteforce(line)))


def lowering(X: NodeSetLike, line: Line) -> LoweringResult:
    ctx = as_context(X)
    lm = _on_line(ctx, line)
    if lm.bit_count() < 2:
        raise TooFewNodes(f"{line} passes through {lm.bit_count()} node(s); at least 2 are needed")
    lowered, u1, u2 = _lower(ctx, ctx.full, lm)
    return LoweringResult(ctx.X, line, _subset_nodeset(ctx, lowered), tuple(u1), tuple(u2))


def classify_line(X: NodeSetLike, line: Line, preference: str = "disjoint-first") -> LineClassification:
    ctx = as_context(X)
    c = _classify(ctx, line, preference)
    if c.variant in (MAXIMAL, UNUSED):
        return LineClassification(c.variant)
    steps = tuple(ReductionStep(kind, lines) for kind, lines, _ in c.steps)
    trace = ReductionTrace(steps, _subset_nodeset(ctx, c.terminal))
    return LineClassification(c.variant, len(steps), trace, tuple(ctx.points(c.hat)))


def hat_2m_nodes(X: NodeSetLike, line: Line) -> list[Point]:
    """Nodes of the line that are 2m-nodes of its lowering.

    Only defined for lines that are neither maximal nor proper.  Unused lines
    are lowered as well and inspected the same way."""
    ctx = as_context(X)
    lm = _on_line(ctx, line)
    c = _classify(ctx, line)
    if c.variant in (MAXIMAL, PROPER):
        raise ValueError(f"{line} is {c.variant}; 2m-nodes of the lowering are only defined otherwise")
    if c.variant == UNUSED:
        lowered, _, _ = _lower(ctx, ctx.full, lm)
        try:
            counts = ctx.node_class_counts(lowered)
        except ValueError:
            return []
        return ctx.points(sum(1 << i for i in _bits(lm & lowered) if counts[i] == 2))
    return ctx.points(c.hat)


def used_nodes_pipeline(X: NodeSetLike, line: Line, preference: str = "disjoint-first") -> UsageReport:
    """Users of ``line`` by lowering and reduction, cross-checked against brute force."""
    ctx = as_context(X)
    c = _classify(ctx, line, preference)
    lm = _on_line(ctx, line)
    brute = ctx.users_bruteforce(line)
    if c.variant == UNUSED:
        users = 0
    else:
        users = c.terminal & ~lm
    if users != brute:
        raise OracleMismatch(
            f"{line}: pipeline found {users.bit_count()} users, brute force {brute.bit_count()}; "
            f"differ at {ctx.points(users ^ brute)}"
        )
    if c.variant == MAXIMAL:
        r, r_hat, s = 0, 0, c.k
    elif c.variant == UNUSED:
        r, r_hat, s = _two_m_on(ctx, lm), 0, None
    else:
        r, r_hat = _two_m_on(ctx, lm), c.hat.bit_count()
        s = (lm & c.terminal).bit_count()
    return UsageReport(
        line=line,
        k=c.k,
        users=tuple(ctx.points(users)),
        r=r,
        r_hat=r_hat,
        s=s,
        delta=ctx.n + 1 - c.k,
        classification=classify_line(ctx, line, preference),
        oracle_agrees=True,
    )


def all_usage_reports(X: NodeSetLike) -> list[UsageReport]:
    """Pipeline report for every line through at least two nodes, in line order."""
    ctx = as_context(X)
    return [used_nodes_pipeline(ctx, line) for line in ctx.masks]


# -- catalog and census --------------------------------------------------------


def family_line_classes(X: NodeSet) -> dict[Line, list[str]]:
    """Line -> class tags implied by the constructor provenance of ``X``.

    A line listed under two tags signals that two classes coincide.
    """
    prov = X.provenance
    if prov is None or prov.spec is None:
        return {}
    from . import constructors as C

    spec = prov.spec
    tags: dict[Line, list[str]] = {}

    def add(line: Line, tag: str) -> None:
        tags.setdefault(line, []).append(tag)

    if isinstance(spec, C.GeneralPositionLines):
        for lam in spec.lines:
            add(lam, "maximal")
    elif isinstance(spec, C.CarnicerGascaSpec):
        for lam in spec.maximal_seed_lines.lines:
            add(lam, "maximal")
        extras = spec.extra_nodes
        seen = set()
        for p, q in combinations(extras, 2):
            line = line_through(p, q)
            if line not in seen:
                seen.add(line)
                add(line, "one-m")
    elif isinstance(spec, C.Defect2Spec):
        for lam in spec.maximal_seed_lines.lines:
            add(lam, "maximal")
        for o in spec.o_lines:
            add(o, "o-line")
        for line in defect_two_l_ij(spec).values():
            add(line, "l-ij")
    elif isinstance(spec, C.Defect3Spec):
        for lam in spec.maximal_seed_lines.lines:
            add(lam, "maximal")
        for o in spec.oo_lines:
            add(o, "oo-line")
        for d in spec.dd_lines:
            add(d, "dd-line")
        for line in defect_three_l_ij(spec).values():
            add(line, "l-ij")
        for line in defect_three_l_i_j(spec).values():
            add(line, "l-i-j")
    elif isinstance(spec, C.GplSpec):
        n = X.degree
        for r, fam in enumerate(spec.families):
            for idx, line in enumerate(fam[:n]):
                add(line, f"gpl-{r}")
    return tags


def defect_two_l_ij(spec) -> dict[tuple[int, int], Line]:
    """The lines ``l_ij`` for the pairs of maximal lines whose four kept
    O-line intersections meet all three O-lines."""
    kept = spec.kept()
    out = {}
    for i, j in combinations(range(len(kept)), 2):
        pts = kept[i] + kept[j]
        used = Counter(m for m, _ in pts)
        if len(used) != 3:
            continue
        shared = next(m for m, c in used.items() if c == 2)
        rest = [p for m, p in pts if m != shared]
        out[(i, j)] = line_through(rest[0], rest[1])
    return out


def defect_three_l_ij(spec) -> dict[tuple[int, int], Line]:
    """``l_ij`` for ``i < j <= 3``: through ``lambda_i ∩ oo_j`` and ``lambda_j ∩ oo_i``."""
    lams, oo = spec.maximal_seed_lines.lines, spec.oo_lines
    return {(i, j): line_through(intersect(lams[i], oo[j]), intersect(lams[j], oo[i]))
            for i, j in combinations(range(3), 2)}


def defect_three_l_i_j(spec) -> dict[tuple[int, int], Line]:
    """``l_i^j`` for ``i <= 3 < j``: through ``D_i`` and ``lambda_j ∩ oo_i``."""
    lams, oo = spec.maximal_seed_lines.lines, spec.oo_lines
    return {(i, j): line_through(spec.d_nodes[i], intersect(lams[j], oo[i]))
            for i in range(3) for j in range(3, len(lams))}


@dataclass(frozen=True)
class CatalogEntry:
    line: Line
    users: int
    family_class: str | None
    classification: str


@dataclass(frozen=True)
class UsedLineCatalog:
    entries: tuple[CatalogEntry, ...]
    classes_disjoint: bool
    collisions: tuple[tuple[Line, tuple[str, ...]], ...]

    @property
    def class_sizes(self) -> dict[str, int]:
        return dict(Counter(e.family_class or "unclassified" for e in self.entries))

    @property
    def class_usages(self) -> dict[str, int]:
        out: Counter = Counter()
        for e in self.entries:
            out[e.family_class or "unclassified"] += e.users
        return dict(out)

    def to_json(self) -> dict:
        return {
            "lines": [{"line": e.line.to_json(), "users": e.users, "class": e.family_class,
                       "classification": e.classification} for e in self.entries],
            "class_sizes": dict(sorted(self.class_sizes.items())),
            "classes_disjoint": self.classes_disjoint,
        }


def usage_census(X: NodeSetLike) -> tuple[int, dict[Line, int]]:
    """Total number of (node, line) usages and the per-line user counts,
    harvested from the line factorizations of all fundamental polynomials."""
    ctx = as_context(X)
    per_line: Counter = Counter()
    for a in range(ctx.N):
        per_line.update(ctx.factorization(a).lines)
    per_line_sorted = dict(sorted(per_line.items()))
    return sum(per_line_sorted.values()), per_line_sorted


def used_line_catalog(X: NodeSetLike) -> UsedLineCatalog:
    ctx = as_context(X)
    _, per_line = usage_census(ctx)
    tags = family_line_classes(ctx.X)
    entries = []
    for line, count in per_line.items():
        t = tags.get(line)
        entries.append(CatalogEntry(line, count, t[0] if t else None,
                                    classify_line(ctx, line).label))
    collisions = tuple((l, tuple(t)) for l, t in sorted(tags.items()) if len(t) > 1)
    return UsedLineCatalog(tuple(entries), not collisions, collisions)
