from fractions import Fraction
from math import comb

import pytest
import sympy as sp

from gcsets.constructors import chung_yao, defect_three, principal_lattice
from gcsets.errors import TooFewNodes
from gcsets.gcset import as_context, maximal_lines
from gcsets.geom import Line, Point, line_through
from gcsets.special import defect_three_hat, defect_two_hat
from gcsets.usage import (
    MAXIMAL,
    PROPER,
    PROPER_MINUS,
    UNUSED,
    classify_line,
    defect_three_l_i_j,
    hat_2m_nodes,
    lowering,
    usage_census,
    used_line_catalog,
    used_nodes_bruteforce,
    used_nodes_pipeline,
)

from _instances import instance, small_sweep


def sympy_users(X, line):
    """Independent oracle: solve for each Lagrange polynomial with sympy and
    test divisibility by the line's linear form."""
    x, y = sp.symbols("x y")
    n = X.degree
    mons = [x**i * y**(d - i) for d in range(n + 1) for i in range(d + 1)]
    pts = list(X.nodes)
    V = sp.Matrix([[m.subs({x: sp.Rational(p.x.numerator, p.x.denominator),
                            y: sp.Rational(p.y.numerator, p.y.denominator)}) for m in mons] for p in pts])
    inv = V.inv()
    form = sp.Rational(line.a) * x + sp.Rational(line.b) * y + sp.Rational(line.c)
    out = set()
    for j, p in enumerate(pts):
        poly = sp.expand(sum(inv[i, j] * mons[i] for i in range(len(mons))))
        if sp.rem(sp.Poly(poly, x, y), sp.Poly(form, x, y)).is_zero:
            out.add(p)
    return out


def test_pl5_diagonal_is_proper_with_ten_users():
    X = principal_lattice(5)
    line = Line(1, 0, -1)
    rep = used_nodes_pipeline(X, line)
    assert rep.k == 5 and len(rep.users) == 10 and rep.label == PROPER
    assert rep.s == 5 and rep.r == rep.r_hat == 0
    assert all(p.x >= 2 for p in rep.users)


def test_chung_yao_maximal_lines():
    X = chung_yao(3, 0)
    for lam in maximal_lines(X):
        rep = used_nodes_pipeline(X, lam)
        assert rep.label == MAXIMAL and len(rep.users) == 6 and rep.s == 4


def test_too_few_nodes():
    X = chung_yao(3, 0)
    p = X.nodes[0]
    line = next(l for l in (line_through(p, Point(p.x + 1, p.y + Fraction(t, 97))) for t in range(1, 50))
                if sum(l.value(q) == 0 for q in X.nodes) == 1)
    with pytest.raises(TooFewNodes):
        used_nodes_pipeline(X, line)
    with pytest.raises(TooFewNodes):
        lowering(X, line)


@pytest.mark.parametrize("family, n, seed", small_sweep())
def test_pipeline_matches_bruteforce(family, n, seed):
    X = instance(family, n, seed)
    ctx = as_context(X)
    for line in ctx.masks:
        rep = used_nodes_pipeline(ctx, line)
        assert set(rep.users) == used_nodes_bruteforce(ctx, line)
        alt = used_nodes_pipeline(ctx, line, "adjoint-first")
        assert alt.users == rep.users and alt.label == rep.label


@pytest.mark.parametrize("family, n", [("defect-2", 3), ("defect-3", 4), ("carnicer-gasca", 3), ("principal", 3)])
def test_bruteforce_matches_sympy(family, n):
    X = instance(family, n, 1)
    for line in as_context(X).masks:
        assert used_nodes_bruteforce(X, line) == sympy_users(X, line)


def test_defect_three_l_i_j_is_proper_minus_two():
    X = defect_three(5, 0)
    for line in defect_three_l_i_j(X.provenance.spec).values():
        rep = used_nodes_pipeline(X, line)
        assert rep.label == "proper_minus_2" and len(rep.users) == 1 and rep.r_hat == 0


def test_defect_three_dd_lines_are_proper_minus_one():
    X = defect_three(5, 2)
    for line in X.provenance.spec.dd_lines:
        rep = used_nodes_pipeline(X, line)
        assert rep.label == "proper_minus_1" and len(rep.users) == 3


def test_lowering_and_trace():
    X = defect_three(5, 0)
    line = X.provenance.spec.dd_lines[0]
    low = lowering(X, line)
    assert low.u1 or low.u2
    assert len(low.lowered) < len(X)
    cl = classify_line(X, line)
    assert cl.variant == PROPER_MINUS and cl.trace.depth == 1
    terminal = cl.trace.terminal
    assert sum(line.value(q) == 0 for q in terminal.nodes) == terminal.degree + 1
    with pytest.raises(ValueError):
        classify_line(X, line, "sideways")


def test_hat_nodes_need_non_proper_line():
    X = principal_lattice(4)
    with pytest.raises(ValueError):
        hat_2m_nodes(X, maximal_lines(X)[0])


def test_defect_two_hat_line():
    X, line = defect_two_hat(4, 0)
    rep = used_nodes_pipeline(X, line)
    assert rep.label == "proper_minus_1" and rep.r_hat == 1 and rep.s == 2 and len(rep.users) == 1
    assert len(hat_2m_nodes(X, line)) == 1


@pytest.mark.parametrize("case, users, depth", [("dd", 3, 1), ("l-ij", 1, 2), ("l-i-j", 1, 2)])
def test_defect_three_hat_lines(case, users, depth):
    X, line = defect_three_hat(5, 0, case)
    rep = used_nodes_pipeline(X, line)
    assert rep.r_hat == 1 and len(rep.users) == users and rep.classification.depth == depth
    assert rep.s == rep.k - rep.r - rep.r_hat


def test_two_adjoint_steps_configuration():
    # the l_3^4 line whose OO-crossings are both 1m-nodes: one hat node, yet
    # two adjoint reductions follow the lowering, so s = k - r - r_hat - 1
    X, line = defect_three_hat(6, 0, "l-i-j-two")
    rep = used_nodes_pipeline(X, line)
    assert (rep.k, rep.r, rep.r_hat, rep.s, len(rep.users)) == (4, 0, 1, 2, 1)
    assert [st.kind for st in rep.classification.trace.steps] == ["adjoint", "adjoint"]
    assert set(rep.users) == sympy_users(X, line)


@pytest.mark.parametrize("family, n, seed", small_sweep())
def test_census_total(family, n, seed):
    X = instance(family, n, seed)
    total, per_line = usage_census(X)
    assert total == n * comb(n + 2, 2)
    cat = used_line_catalog(X)
    assert sum(e.users for e in cat.entries) == total
    assert all(e.classification != UNUSED for e in cat.entries)
    if family != "principal" or seed == 0:
        assert cat.classes_disjoint


def test_unused_line_report():
    X = principal_lattice(4)
    ctx = as_context(X)
    unused = [l for l in ctx.masks if not ctx.users_bruteforce(l)]
    assert unused
    rep = used_nodes_pipeline(X, unused[0])
    assert rep.label == UNUSED and rep.users == () and rep.s is None
