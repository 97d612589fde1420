"""Executable structural checks on GC_n sets.

Every checker takes a node set (or its analysis context) and returns a
:class:`TheoremReport` with status ``pass``, ``fail`` or ``skipped``.  Failures
carry up to ``WITNESS_CAP`` structured witnesses plus the total number of
violations; passes record how many cases were examined.  Hypotheses that do
not hold for the instance (degree too small, wrong family) give ``skipped``
with a reason instead of a vacuous pass.

The theorem ids are stable strings used by the command line front end.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable, Iterable

from .errors import GCError, NonTermination, OracleMismatch
from .gcset import GCContext, NodeSetLike, _bits, as_context
from .geom import Line, Point, intersect
from .usage import (
    MAXIMAL,
    PROPER,
    PROPER_MINUS,
    UNUSED,
    UsageReport,
    _classify,
    defect_three_l_ij,
    family_line_classes,
    used_nodes_pipeline,
    usage_census,
)

WITNESS_CAP = 10
GM_PROVED_UP_TO = 5

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class TheoremReport:
    theorem_id: str
    instance: dict
    status: str = PASS
    cases: int = 0
    violations: int = 0
    witnesses: list[dict] = field(default_factory=list)
    reason: str | None = None
    notes: dict = field(default_factory=dict)

    def case(self, ok: bool, **witness) -> bool:
        """Record one examined case; a failing case adds a witness."""
        self.cases += 1
        if not ok:
            self.violations += 1
            self.status = FAIL
            if len(self.witnesses) < WITNESS_CAP:
                self.witnesses.append(_jsonable(witness))
        return ok

    def to_json(self) -> dict:
        out = {
            "theorem_id": self.theorem_id,
            "instance": self.instance,
            "status": self.status,
            "cases": self.cases,
            "violations": self.violations,
            "witnesses": self.witnesses,
        }
        if self.reason is not None:
            out["reason"] = self.reason
        if self.notes:
            out["notes"] = _jsonable(self.notes)
        return out


def _jsonable(obj):
    if isinstance(obj, (Line, Point)):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    return obj


def instance_summary(ctx: GCContext) -> dict:
    prov = ctx.X.provenance
    return {
        "family": prov.family if prov else None,
        "degree": ctx.n,
        "seed": prov.seed if prov else None,
        "nodes": ctx.N,
    }


def _report(ctx: GCContext, theorem_id: str) -> TheoremReport:
    return TheoremReport(theorem_id, instance_summary(ctx))


def _skip(rep: TheoremReport, reason: str) -> TheoremReport:
    rep.status = SKIPPED
    rep.reason = reason
    return rep


# -- shared per-instance data ------------------------------------------------


def _usage_reports(ctx: GCContext) -> dict[Line, UsageReport | GCError]:
    """Pipeline report for every line through >= 2 nodes; errors are kept as values."""
    hit = ctx.cache.get("usage-reports")
    if hit is None:
        hit = {}
        for line in ctx.masks:
            try:
                hit[line] = used_nodes_pipeline(ctx, line)
            except (OracleMismatch, NonTermination, ValueError) as exc:
                hit[line] = exc
        ctx.cache["usage-reports"] = hit
    return hit


def _defect_of(ctx: GCContext, S: int) -> int:
    return ctx.subset_degree(S) + 2 - len(ctx.maximal_lines_in(S))


def _proper_lines(ctx: GCContext) -> list[Line]:
    return [l for l, rep in _usage_reports(ctx).items()
            if isinstance(rep, UsageReport) and rep.classification.variant == PROPER]


def _n_node_lines(ctx: GCContext) -> list[Line]:
    return [l for l, m in ctx.masks.items() if m.bit_count() == ctx.n]


def _line_type(ctx: GCContext, line: Line) -> tuple[int, int, int]:
    counts = ctx.node_class_counts()
    t = [0, 0, 0]
    for i in _bits(ctx.line_mask(line)):
        t[min(counts[i], 2)] += 1
    return tuple(t)


def _meets_at_node(ctx: GCContext, l1: Line, l2: Line) -> bool:
    return bool(ctx.line_mask(l1) & ctx.line_mask(l2))


# -- gate ------------------------------------------------------------------------


def check_gc(X: NodeSetLike) -> TheoremReport:
    """The instance must be n-correct and every fundamental polynomial must split."""
    ctx = as_context(X)
    rep = _report(ctx, "gc")
    if not rep.case(ctx.n_correct, message="collocation matrix is singular"):
        return rep
    failures = {exc.node: exc for exc in ctx.gc_failures()}
    for p in ctx.nodes:
        exc = failures.get(p)
        rep.case(exc is None, node=p,
                 peeled=len(exc.lines) if exc else ctx.n,
                 diagnostics=exc.diagnostics if exc else {})
    return rep


# -- usage cardinality -------------------------------------------------------------


def check_usage_cardinality(X: NodeSetLike) -> TheoremReport:
    """Used lines: #users = C(s, 2), s = k - r - r_hat, k - delta <= s <= k,
    r_hat <= 2, r_hat = 0 when #users > 3, #users in {1, 3, C(k - r, 2)}, users
    form a GC_{s-2} set, and maximal lines are used by exactly X minus the line."""
    ctx = as_context(X)
    rep = _report(ctx, "thm-7.2")
    used = 0
    for line, r in _usage_reports(ctx).items():
        if isinstance(r, GCError):
            rep.case(False, line=line, message=f"{type(r).__name__}: {r}")
            continue
        if r.classification.variant == UNUSED:
            rep.cases += 1
            continue
        used += 1
        cnt = len(r.users)
        s = r.s
        rep.case(cnt == comb(s, 2), line=line, users=cnt, s=s, message="#users != C(s,2)")
        late = 0
        if r.classification.variant == PROPER_MINUS:
            late = sum(1 for kind, _, _ in _classify(ctx, line).steps if kind == "adjoint")
        rep.case(s == r.k - r.r - r.r_hat, line=line, k=r.k, r=r.r, r_hat=r.r_hat, s=s,
                 adjoint_steps_after_lowering=late, message="s != k - r - r_hat")
        rep.case(r.k - r.delta <= s <= r.k, line=line, k=r.k, delta=r.delta, s=s,
                 message="s outside [k - delta, k]")
        rep.case(r.r_hat <= 2, line=line, r_hat=r.r_hat, message="more than two hat-2m nodes")
        if cnt > 3:
            rep.case(r.r_hat == 0, line=line, users=cnt, r_hat=r.r_hat,
                     message="hat-2m node on a line used by more than 3 nodes")
        rep.case(cnt in (1, 3, comb(r.k - r.r, 2)), line=line, users=cnt, k=r.k, r=r.r,
                 message="#users not in {1, 3, C(k-r, 2)}")
        if r.classification.variant == MAXIMAL:
            expect = set(ctx.points(ctx.full & ~ctx.line_mask(line)))
            rep.case(set(r.users) == expect and r.r == r.r_hat == 0, line=line,
                     message="maximal line not used by exactly the nodes off it")
        if s >= 3:
            sub = ctx.subcontext(ctx.mask_of(r.users))
            rep.case(sub.n == s - 2 and sub.is_gc, line=line, s=s,
                     message=f"users do not form a GC_{s - 2} set")
    rep.notes["used_lines"] = used
    return rep


# -- reduction depth ---------------------------------------------------------------


def check_reduction_depth(X: NodeSetLike) -> TheoremReport:
    """Non-maximal used lines: def(lowering) is def(X) - 1 or - 2, some reduction
    applies, and (when def(X) != n - 1 or n <= 4) the line is proper or proper
    (-1)/(-2) with at most r hat-2m nodes; every hat-2m node is the meet of a
    proper line that is maximal in the lowering with a maximal line of X.

    Also re-runs each classification with the reversed reduction preference and
    records any difference in depth, users or d/a items under ``notes``."""
    ctx = as_context(X)
    rep = _report(ctx, "thm-7.1")
    d = _defect_of(ctx, ctx.full)
    depth_clause = not (d == ctx.n - 1 and ctx.n >= 5)
    if not depth_clause:
        rep.notes["depth_clause"] = "skipped: defect n-1 with n >= 5"
    proper = set(_proper_lines(ctx))
    M = ctx.maximal_lines_in()
    disagreements, item_differences, lowered_degrees = [], 0, Counter()
    for line, r in _usage_reports(ctx).items():
        if isinstance(r, GCError):
            rep.case(False, line=line, message=f"{type(r).__name__}: {r}")
            continue
        variant = r.classification.variant
        if variant in (MAXIMAL, UNUSED):
            continue
        c = _classify(ctx, line)
        dl = _defect_of(ctx, c.lowered)
        rep.case(dl in (d - 1, d - 2), line=line, defect=d, lowered_defect=dl,
                 message="defect of the lowering is not def-1 or def-2")
        rep.case(bool(c.u1 or c.u2), line=line, message="no disjoint line or adjoint pair")
        lowered_degrees[(variant, ctx.subset_degree(c.lowered))] += 1
        if depth_clause:
            rep.case(variant == PROPER or r.classification.depth in (1, 2), line=line,
                     label=r.label, message="line deeper than proper(-2)")
            rep.case(r.r_hat <= r.classification.depth, line=line, r_hat=r.r_hat,
                     depth=r.classification.depth, message="more hat-2m nodes than reduction steps")
            if variant == PROPER_MINUS:
                rep.case(len(r.users) in (1, 3), line=line, users=len(r.users),
                         message="non-proper line not used by a GC_0 or GC_1 set")
                rep.case(ctx.subset_degree(c.lowered) <= 5, line=line,
                         lowered_degree=ctx.subset_degree(c.lowered),
                         message="lowering of a non-proper line has degree > 5")
        for S in ctx.points(c.hat):
            s_bit = 1 << ctx.index(S)
            via_proper = [l for l in ctx.maximal_lines_in(c.lowered)
                          if l in proper and ctx.masks[l] & s_bit]
            via_max = [l for l in M if ctx.masks[l] & s_bit]
            rep.case(bool(via_proper) and bool(via_max), line=line, node=S,
                     message="hat-2m node is not a proper/maximal intersection")
        alt = _classify(ctx, line, "adjoint-first")
        if alt.variant != c.variant or len(alt.steps) != len(c.steps) or \
                (alt.terminal & ~ctx.line_mask(line)) != (c.terminal & ~ctx.line_mask(line)):
            disagreements.append({"line": line, "default": r.label, "reversed": len(alt.steps)})
        elif [set(s[1]) for s in alt.steps] != [set(s[1]) for s in c.steps]:
            item_differences += 1
    rep.notes["preference_disagreements"] = disagreements
    rep.notes["lines_with_different_da_items"] = item_differences
    rep.notes["lowered_degree_by_class"] = {f"{v}:{deg}": n for (v, deg), n in sorted(lowered_degrees.items())}
    return rep


# -- lowering degree ---------------------------------------------------------------


def check_lowering_degree(X: NodeSetLike) -> TheoremReport:
    """A non-maximal line through exactly j 1m-nodes has a lowering of degree
    def(X) + j - 2 (checked on used lines, whose lowerings are GC sets)."""
    ctx = as_context(X)
    rep = _report(ctx, "prop-2.11")
    d = _defect_of(ctx, ctx.full)
    for line, r in _usage_reports(ctx).items():
        if isinstance(r, GCError) or r.classification.variant in (MAXIMAL, UNUSED):
            continue
        j = _line_type(ctx, line)[1]
        c = _classify(ctx, line)
        deg = ctx.subset_degree(c.lowered)
        rep.case(deg == d + j - 2, line=line, one_m=j, defect=d, lowered_degree=deg,
                 message="lowered degree != def + j - 2")
    return rep


# -- maximal-line trace ------------------------------------------------------------


def check_maximal_trace(X: NodeSetLike) -> TheoremReport:
    """For used lines with #users = C(s, 2) and maximal lines lambda != line:
    #(lambda ∩ users) is s - 1 or 0, and 0 exactly when lambda is line-disjoint,
    in a line-adjoint pair, or through a hat-2m node; these causes never overlap
    and at most two maximal lines are special."""
    ctx = as_context(X)
    rep = _report(ctx, "thm-7.3")
    M = ctx.maximal_lines_in()
    cause_counts: Counter = Counter()
    for line, r in _usage_reports(ctx).items():
        if isinstance(r, GCError):
            rep.case(False, line=line, message=f"{type(r).__name__}: {r}")
            continue
        if r.classification.variant == UNUSED or r.s < 2:
            continue
        users = ctx.mask_of(r.users)
        if r.classification.variant == MAXIMAL:
            disjoint, adjoint, hat, later = set(), set(), 0, set()
        else:
            c = _classify(ctx, line)
            disjoint = set(c.u1)
            adjoint = {lam for pair in c.u2 for lam in pair}
            hat = c.hat
            later = {lam for kind, lines, _ in c.steps if kind == "adjoint" for lam in lines}
        special = {lam for lam in M if ctx.masks[lam] & hat}
        rep.case(len(special) <= 2, line=line, special=sorted(special),
                 message="more than two special maximal lines")
        for lam in M:
            if lam == line:
                continue
            cnt = (ctx.masks[lam] & users).bit_count()
            causes = [name for name, group in (("disjoint", disjoint), ("adjoint", adjoint),
                                               ("special", special)) if lam in group]
            rep.case(cnt in (r.s - 1, 0), line=line, maximal=lam, count=cnt, s=r.s,
                     message="count not in {s-1, 0}")
            rep.case((cnt == 0) == bool(causes), line=line, maximal=lam, count=cnt, causes=causes,
                     in_later_adjoint_step=lam in later, message="zero count and cause list disagree")
            rep.case(len(causes) <= 1, line=line, maximal=lam, causes=causes,
                     message="causes overlap")
            if cnt == 0 and causes:
                cause_counts[causes[0]] += 1
    rep.notes["zero_causes"] = dict(sorted(cause_counts.items()))
    return rep


# -- proper and n-node lines -------------------------------------------------------


def check_proper_sets(X: NodeSetLike) -> TheoremReport:
    """n >= 4: N(X) ⊆ Pr(X), #N <= 3, n-node lines pairwise meet at nodes and
    each meets all maximal lines but at most one at nodes; #Pr in {0, 3} when
    def(X) != 1; family-specific proper sets when provenance is present."""
    ctx = as_context(X)
    rep = _report(ctx, "prop-8.1")
    if ctx.n < 4:
        return _skip(rep, "requires n >= 4")
    N = _n_node_lines(ctx)
    Pr = _proper_lines(ctx)
    M = ctx.maximal_lines_in()
    d = _defect_of(ctx, ctx.full)
    rep.notes["N"] = N
    rep.notes["Pr"] = Pr
    for line in N:
        rep.case(line in Pr, line=line, message="n-node line is not proper")
        missed = [lam for lam in M if not _meets_at_node(ctx, line, lam)]
        rep.case(len(missed) <= 1, line=line, missed=missed,
                 message="n-node line misses more than one maximal line")
    rep.case(len(N) <= 3, count=len(N), message="more than three n-node lines")
    for l1, l2 in combinations(N, 2):
        rep.case(_meets_at_node(ctx, l1, l2), lines=[l1, l2],
                 message="two n-node lines do not meet at a node")
    if d != 1:
        rep.case(len(Pr) in (0, 3), count=len(Pr), message="#Pr not in {0, 3}")
    if len(M) == 3:
        rep.case(set(Pr) == set(N) and len(N) == 3, Pr=Pr, N=N,
                 message="three maximal lines but Pr != N or #N != 3")
    expected = _expected_proper(ctx)
    if expected is not None:
        rep.case(set(Pr) == set(expected), Pr=Pr, expected=expected,
                 message="proper lines differ from the family prediction")
    return rep


def _expected_proper(ctx: GCContext) -> list[Line] | None:
    prov = ctx.X.provenance
    if prov is None or prov.spec is None:
        return None
    tags = family_line_classes(ctx.X)
    wanted = {"chung-yao": set(), "carnicer-gasca": {"one-m"}, "defect-2": {"o-line"},
              "defect-3": {"oo-line"}}.get(prov.family)
    if prov.family == "principal":
        return [fam[1] for fam in prov.spec.families]
    if wanted is None:
        return None
    return [l for l, t in tags.items() if wanted & set(t)]


# -- defect laws -------------------------------------------------------------------


def check_defect_laws(X: NodeSetLike) -> TheoremReport:
    """def(X) in {0, 1, 2, 3, n-1}; for each maximal lambda, def(X minus lambda)
    is def or def - 1 (when it keeps >= 3 maximal lines), with the drop exactly
    when some type-(i, j, 0) n-node line misses lambda at the nodes (n >= 4), for
    at most three lambda; three maximal lines stay three after a removal."""
    ctx = as_context(X)
    rep = _report(ctx, "thm-2.2")
    n = ctx.n
    d = _defect_of(ctx, ctx.full)
    rep.case(d in {0, 1, 2, 3, n - 1}, defect=d, message="defect outside {0,1,2,3,n-1}")
    M = ctx.maximal_lines_in()
    N0 = [l for l in _n_node_lines(ctx) if _line_type(ctx, l)[2] == 0] if n >= 4 else []
    drops = 0
    for lam in M:
        Y = ctx.full & ~ctx.masks[lam]
        if ctx.subset_degree(Y) < 1:
            continue
        MY = ctx.maximal_lines_in(Y)
        dY = _defect_of(ctx, Y)
        if len(MY) >= 3:
            rep.case(dY in (d, d - 1), maximal=lam, defect=d, reduced_defect=dY,
                     message="removing a maximal line changed the defect by other than 0 or -1")
        if dY == d - 1:
            drops += 1
        if n >= 4:
            witness = [l for l in N0 if not _meets_at_node(ctx, l, lam)]
            rep.case((dY == d - 1) == bool(witness), maximal=lam, defect=d, reduced_defect=dY,
                     n_node_lines_missing=witness,
                     message="defect drop does not match a type-(i,j,0) n-node line missing lambda")
        if len(M) == 3 and n >= 2:
            rep.case(len(MY) == 3, maximal=lam, remaining=len(MY),
                     message="three maximal lines did not stay three after removal")
    if n >= 4:
        rep.case(drops <= 3, drops=drops, message="defect drops for more than three maximal lines")
    rep.notes["defect"] = d
    rep.notes["drops"] = drops
    return rep


# -- node profile ------------------------------------------------------------------

PROFILE_ITEMS = {
    1: lambda n: (n, 0, 0, 0),
    2: lambda n: (n - 1, 1, 0, 0),
    3: lambda n: (n - 2, 2, 0, 0),
    4: lambda n: (n - 2, 1, 1, 0),
    5: lambda n: (n - 3, 3, 0, 0),
    6: lambda n: (n - 3, 2, 0, 1),
    7: lambda n: (n - 3, 1, 1, 1),
}


def node_profile(ctx: GCContext, a: int) -> tuple[int, int, int, int, int]:
    """(maximal, proper, proper(-1), proper(-2), other) counts of node a's lines."""
    tally = Counter()
    for line in ctx.factorization(a).lines:
        tally[_classify(ctx, line).variant, len(_classify(ctx, line).steps)] += 1
    maximal = tally[MAXIMAL, 0]
    proper = tally[PROPER, 0]
    pm1 = tally[PROPER_MINUS, 1]
    pm2 = tally[PROPER_MINUS, 2]
    other = sum(tally.values()) - maximal - proper - pm1 - pm2
    return maximal, proper, pm1, pm2, other


def profile_item(n: int, profile: tuple[int, ...]) -> int | None:
    if profile[4]:
        return None
    for item, f in PROFILE_ITEMS.items():
        if f(n) == tuple(profile[:4]):
            return item
    return None


def _expected_items(ctx: GCContext) -> dict[int, set[int]] | None:
    """Node index -> allowed profile items, from the family of the instance."""
    prov = ctx.X.provenance
    if prov is None or prov.spec is None or prov.family == "principal":
        return None
    counts = ctx.node_class_counts()
    out = {}
    if prov.family == "chung-yao":
        return {a: {1} for a in range(ctx.N)}
    if prov.family == "carnicer-gasca":
        return {a: ({1} if counts[a] == 1 else {2}) for a in range(ctx.N)}
    if prov.family == "defect-2":
        table = {0: {1}, 1: {2}, 2: {3, 4}}
        return {a: table[counts[a]] for a in range(ctx.N)}
    if prov.family == "defect-3":
        spec = prov.spec
        O = {ctx.index(p) for p in spec.o_nodes}
        D = {ctx.index(p) for p in spec.d_nodes}
        for a in range(ctx.N):
            if a in O:
                out[a] = {2}
            elif a in D:
                out[a] = {3}
            elif counts[a] == 1:
                out[a] = {3, 4}
            else:
                out[a] = {5, 6, 7}
        return out
    return None


def check_node_profile(X: NodeSetLike) -> TheoremReport:
    """Each node's n lines: at most 3 proper, 1 proper(-1), 1 proper(-2), at least
    n - 3 maximal, matching one of the seven profile items (and the family's item
    per node type when provenance is present)."""
    ctx = as_context(X)
    rep = _report(ctx, "prop-8.4")
    d = _defect_of(ctx, ctx.full)
    if ctx.n >= 5 and d == ctx.n - 1:
        return _skip(rep, "requires def(X) != n-1 when n >= 5")
    expected = _expected_items(ctx)
    items: Counter = Counter()
    for a, p in enumerate(ctx.nodes):
        prof = node_profile(ctx, a)
        m, pr, p1, p2, other = prof
        ok = other == 0 and pr <= 3 and p1 <= 1 and p2 <= 1 and m >= ctx.n - 3
        rep.case(ok, node=p, profile=list(prof), message="node profile bounds violated")
        item = profile_item(ctx.n, prof)
        rep.case(item is not None, node=p, profile=list(prof), message="profile is none of items 1-7")
        items[item] += 1
        if expected is not None:
            rep.case(item in expected[a], node=p, item=item, allowed=sorted(expected[a]),
                     message="profile item differs from the family prediction")
    rep.notes["items"] = {str(k): v for k, v in sorted(items.items(), key=lambda kv: str(kv[0]))}
    return rep


# -- Pappus exclusion --------------------------------------------------------------


def check_pappus_exclusion(X: NodeSetLike) -> TheoremReport:
    """Defect-3 instances: l_ij avoids D_k, and no OO-line passes through a
    2m-node (in particular O_j, O_k and A_jk are never collinear)."""
    ctx = as_context(X)
    rep = _report(ctx, "lemma-5.2")
    prov = ctx.X.provenance
    if prov is None or prov.family != "defect-3" or prov.spec is None:
        return _skip(rep, "requires a defect-3 instance with provenance")
    spec = prov.spec
    for (i, j), line in defect_three_l_ij(spec).items():
        k = 3 - i - j
        rep.case(ctx.index(spec.d_nodes[k]) not in _bits(ctx.line_mask(line)), line=line,
                 node=spec.d_nodes[k], message=f"l_{i + 1}{j + 1} passes through D_{k + 1}")
    lams = spec.maximal_seed_lines.lines
    counts = ctx.node_class_counts()
    for i, o in enumerate(spec.oo_lines):
        j, k = [t for t in range(3) if t != i]
        a_jk = intersect(lams[j], lams[k])
        rep.case(not (ctx.line_mask(o) & (1 << ctx.index(a_jk))), line=o, node=a_jk,
                 message="O_j, O_k and A_jk are collinear")
        on2m = [ctx.nodes[t] for t in _bits(ctx.line_mask(o)) if counts[t] >= 2]
        rep.case(not on2m, line=o, nodes=on2m, message="an OO-line passes through a 2m-node")
    return rep


# -- census --------------------------------------------------------------------------


def census_formula(family: str, n: int) -> dict[str, int]:
    """Expected usage subtotals per line class."""
    if family == "chung-yao":
        return {"maximal": (n + 2) * comb(n + 1, 2)}
    if family == "carnicer-gasca":
        return {"maximal": (n + 1) * comb(n + 1, 2), "one-m": comb(n + 1, 2)}
    if family == "defect-2":
        return {"maximal": n * comb(n + 1, 2), "o-line+l-ij": 2 * comb(n, 2) + 2 * n}
    if family == "defect-3":
        out = {"maximal": (n - 1) * comb(n + 1, 2), "oo-line": 3 * comb(n, 2),
               "dd-line": 9, "l-ij": 3}
        if n > 4:
            out["l-i-j"] = 3 * (n - 4)
        return out
    if family == "principal":
        return {f"gpl-{r}": comb(n + 2, 3) for r in range(3)}
    raise ValueError(family)


def check_census(X: NodeSetLike) -> TheoremReport:
    """Total usages equal n * C(n+2, 2), per-line counts agree with brute force,
    and per-class subtotals match the family formula."""
    ctx = as_context(X)
    rep = _report(ctx, "census")
    n = ctx.n
    total, per_line = usage_census(ctx)
    rep.case(total == n * comb(n + 2, 2), total=total, expected=n * comb(n + 2, 2),
             message="total usages != n * C(n+2, 2)")
    for line, count in per_line.items():
        rep.case(ctx.users_bruteforce(line).bit_count() == count, line=line, census=count,
                 message="census count disagrees with brute-force users")
    rep.notes["total"] = total
    prov = ctx.X.provenance
    if prov is not None and prov.spec is not None and prov.family in ("chung-yao", "carnicer-gasca",
                                                                      "defect-2", "defect-3", "principal"):
        tags = family_line_classes(ctx.X)
        sub: Counter = Counter()
        for line, count in per_line.items():
            t = tags.get(line, ["unclassified"])[0]
            if prov.family == "defect-2" and t in ("o-line", "l-ij"):
                t = "o-line+l-ij"
            sub[t] += count
        expected = census_formula(prov.family, n)
        rep.case(dict(sub) == expected, subtotals=dict(sub), expected=expected,
                 message="class subtotals differ from the family formula")
        rep.notes["subtotals"] = dict(sorted(sub.items()))
    return rep


# -- three maximal lines -------------------------------------------------------------


def check_gpl_structure(X: NodeSetLike) -> TheoremReport:
    """Sets with exactly three maximal lines: every used non-maximal k-node line
    is used by C(k, 2) nodes, its lowering removes a single disjoint maximal line
    and lowers the defect by one; with lattice provenance the users of
    the line with index n-k+1 of family r are X minus that family's lines 0..n-k+1."""
    ctx = as_context(X)
    rep = _report(ctx, "gpl-structure")
    M = ctx.maximal_lines_in()
    if len(M) != 3:
        return _skip(rep, "requires exactly three maximal lines")
    d = _defect_of(ctx, ctx.full)
    for line, r in _usage_reports(ctx).items():
        if isinstance(r, GCError):
            rep.case(False, line=line, message=f"{type(r).__name__}: {r}")
            continue
        if r.classification.variant in (MAXIMAL, UNUSED):
            continue
        c = _classify(ctx, line)
        rep.case(len(r.users) == comb(r.k, 2), line=line, users=len(r.users), k=r.k,
                 message="#users != C(k, 2)")
        rep.case(len(c.u1) == 1 and not c.u2, line=line, u1=c.u1, u2=c.u2,
                 message="lowering is not a single disjoint reduction")
        rep.case(_defect_of(ctx, c.lowered) == d - 1, line=line,
                 message="lowering does not lower the defect by one")
    prov = ctx.X.provenance
    if prov is not None and prov.family == "principal" and prov.spec is not None:
        n = ctx.n
        for r_idx, fam in enumerate(prov.spec.families):
            for idx in range(1, n):
                line = fam[idx]
                k = ctx.line_mask(line).bit_count()
                removed = 0
                for t in range(idx + 1):
                    removed |= ctx.line_mask(fam[t])
                expect = ctx.full & ~removed
                got = ctx.users_bruteforce(line)
                rep.case(got == expect and idx == n - k + 1, family=r_idx, index=idx,
                         message="users differ from the lattice formula")
    return rep


# -- bundle --------------------------------------------------------------------------

CHECKERS: dict[str, Callable[[NodeSetLike], TheoremReport]] = {
    "census": check_census,
    "gpl-structure": check_gpl_structure,
    "lemma-5.2": check_pappus_exclusion,
    "prop-2.11": check_lowering_degree,
    "prop-8.1": check_proper_sets,
    "prop-8.4": check_node_profile,
    "thm-2.2": check_defect_laws,
    "thm-7.1": check_reduction_depth,
    "thm-7.2": check_usage_cardinality,
    "thm-7.3": check_maximal_trace,
}


@dataclass
class ReportBundle:
    instance: dict
    reports: list[TheoremReport]
    gm_conditional: bool

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.reports)

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "reports": [r.to_json() for r in self.reports],
            "gm_conditional": self.gm_conditional,
        }


def run_checks(X: NodeSetLike, theorems: Iterable[str] | str = "all") -> ReportBundle:
    """Run the requested checkers (``"all"`` or ids).  A set that is not GC gets a
    failing ``gc`` report and every other checker is skipped."""
    ctx = as_context(X)
    if theorems == "all":
        ids = sorted(CHECKERS)
    else:
        ids = sorted(set(theorems))
        unknown = [t for t in ids if t not in CHECKERS]
        if unknown:
            raise ValueError(f"unknown theorem ids: {unknown}; known: {sorted(CHECKERS)}")
    gate = check_gc(ctx)
    reports = [gate]
    for tid in ids:
        if gate.status == FAIL:
            reports.append(_skip(_report(ctx, tid), "instance is not a GC set"))
        else:
            reports.append(CHECKERS[tid](ctx))
    return ReportBundle(instance_summary(ctx), reports, ctx.n > GM_PROVED_UP_TO)
