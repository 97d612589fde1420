from collections import Counter
from fractions import Fraction
from math import comb

import pytest

from gcsets.constructors import (
    Defect3Spec,
    _random_point_on,
    carnicer_gasca,
    chung_yao,
    default_drop_choice,
    defect_three,
    defect_three_from_spec,
    defect_two,
    defect_two_from_spec,
    general_position_lines,
    generate,
    make_rng,
    principal_lattice,
    random_affine,
    validate_defect_three,
    validate_defect_two,
)
from gcsets.errors import CharacterizationViolated, GenerationFailed, SingularTransform
from gcsets.gcset import defect, is_gc, maximal_lines, node_classes
from gcsets.geom import Point, collinear, incident, intersect, line_through
from gcsets.usage import defect_three_l_ij


def test_general_position_lines():
    g = general_position_lines(7, 3)
    pts = g.intersections()
    assert len(set(pts)) == comb(7, 2)
    assert all(intersect(a, b) is not None for i, a in enumerate(g.lines) for b in g.lines[i + 1:])


def test_generation_failure_is_reported():
    with pytest.raises(GenerationFailed):
        chung_yao(5, 0, bound=1, retries=1)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_chung_yao_counts(n):
    X = chung_yao(n, 2)
    assert len(X) == comb(n + 2, 2) and len(maximal_lines(X)) == n + 2
    assert set(node_classes(X).values()) == {2}


def test_carnicer_gasca_counts():
    X = carnicer_gasca(2, 0)
    assert len(X) == 6 and len(maximal_lines(X)) == 3
    X = carnicer_gasca(3, 1)
    assert len(X) == comb(4, 2) + 4 == 10 and len(maximal_lines(X)) == 4
    assert not collinear(*X.provenance.spec.extra_nodes[:3])


def test_defect_two_counts_and_clauses():
    X = defect_two(4, 5)
    classes = Counter(node_classes(X).values())
    assert classes == {2: 6, 1: 8, 0: 1}
    spec = X.provenance.spec
    assert validate_defect_two(4, spec) == []
    assert all(incident(o, spec.center) for o in spec.o_lines)
    for o in spec.o_lines:
        assert sum(incident(o, p) for p in X.nodes) <= 4
    assert len(defect_two(3, 0)) == 10


def test_default_drop_choice_keeps_o_lines_short():
    g = general_position_lines(5, 1)
    center = Point(Fraction(1, 7), Fraction(2, 9))
    o_lines = [line_through(center, Point(center.x + dx, center.y + 1)) for dx in (1, 2, 3)]
    drop = default_drop_choice(g.lines, o_lines)
    assert set(drop) == {0, 1, 2}


def test_defect_two_rejects_bad_drop_choice():
    with pytest.raises(GenerationFailed):
        defect_two(4, 0, drop_choice=(0, 0, 0, 0), retries=5)


def test_defect_three_counts_and_clauses():
    X = defect_three(5, 1)
    assert len(X) == 21 and len(maximal_lines(X)) == 4
    spec = X.provenance.spec
    assert validate_defect_three(5, spec) == []
    for i in range(3):
        j, k = [t for t in range(3) if t != i]
        assert collinear(spec.o_nodes[i], spec.d_nodes[j], spec.d_nodes[k])
        assert intersect(spec.oo_lines[i], spec.maximal_seed_lines.lines[i]) not in X
    assert len(defect_three(4, 0)) == comb(3, 2) + 9 + 3


def test_pappus_configuration_is_rejected():
    # force O_2, O_3 and A_23 onto one line; then D_1 lands on l_23 and the set
    # breaks the characterization before any lemma is reached
    rng = make_rng(0)
    g = general_position_lines(4, 0, rng=rng)
    lams = g.lines
    D = [_random_point_on(lams[i], rng, 50) for i in range(3)]
    O1 = _random_point_on(line_through(D[1], D[2]), rng, 50)
    O2 = _random_point_on(line_through(D[0], D[2]), rng, 50)
    A23 = intersect(lams[1], lams[2])
    O3 = intersect(line_through(O2, A23), line_through(D[0], D[1]))
    spec = Defect3Spec(g, tuple(D), (O1, O2, O3))
    assert collinear(O2, O3, A23)
    assert incident(defect_three_l_ij(spec)[(1, 2)], D[0])
    assert validate_defect_three(5, spec)
    with pytest.raises(CharacterizationViolated):
        defect_three_from_spec(5, spec)


def test_defect_two_from_spec_rejects_center_on_line():
    X = defect_two(4, 2)
    spec = X.provenance.spec
    lam = spec.maximal_seed_lines.lines[0]
    bad = type(spec)(spec.maximal_seed_lines, intersect(lam, spec.o_lines[0]), spec.o_lines, spec.drop_choice)
    with pytest.raises(CharacterizationViolated):
        defect_two_from_spec(4, bad)


def test_principal_lattice():
    X = principal_lattice(5)
    assert len(X) == 21 and Point(0, 0) in X and Point(5, 0) in X and Point(3, 3) not in X
    assert len(principal_lattice(1)) == 3
    with pytest.raises(SingularTransform):
        principal_lattice(3, (((1, 2), (2, 4)), (0, 0)))
    fams = X.provenance.spec.families
    assert len({l for fam in fams for l in fam}) == 3 * 6
    for i, l0 in enumerate(fams[0]):
        for j, l1 in enumerate(fams[1]):
            for k, l2 in enumerate(fams[2]):
                p = intersect(l0, l1)
                assert (p is not None and incident(l2, p) and p in X) == (i + j + k == 5)


@pytest.mark.parametrize("family, n", [("chung-yao", 4), ("carnicer-gasca", 4), ("defect-2", 4), ("defect-3", 5)])
def test_determinism(family, n):
    a, b = generate(family, n, 17), generate(family, n, 17)
    assert a == b and a.nodes == b.nodes and a.provenance == b.provenance
    assert generate(family, n, 18) != a


@pytest.mark.parametrize("family, n, expected", [
    ("chung-yao", 4, 0), ("carnicer-gasca", 4, 1), ("defect-2", 4, 2), ("defect-3", 4, 3), ("principal", 4, 3),
])
def test_advertised_defects(family, n, expected):
    X = generate(family, n, 3)
    assert is_gc(X) and defect(X) == expected


def test_degree_bounds():
    with pytest.raises(ValueError):
        defect_two(2, 0)
    with pytest.raises(ValueError):
        defect_three(3, 0)
    with pytest.raises(ValueError):
        generate("nope", 3)


def test_random_affine_is_invertible_and_seeded():
    (m, t) = random_affine(4)
    assert m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0
    assert random_affine(4) == (m, t)
