"""Exact construction and structural analysis of GC_n interpolation node sets."""

from .constructors import (
    FAMILIES,
    carnicer_gasca,
    chung_yao,
    defect_three,
    defect_two,
    generate,
    principal_lattice,
)
from .gcset import (
    NodeSet,
    Provenance,
    analyze,
    defect,
    factor_fundamental,
    is_gc,
    line_profile,
    maximal_lines,
    node_classes,
)
from .geom import Line, Point, canonical_line, intersect, line_through
from .usage import (
    classify_line,
    hat_2m_nodes,
    lowering,
    usage_census,
    used_line_catalog,
    used_nodes_bruteforce,
    used_nodes_pipeline,
)
from .verify import run_checks

__all__ = [
    "FAMILIES", "Line", "NodeSet", "Point", "Provenance", "analyze", "canonical_line",
    "carnicer_gasca", "chung_yao", "classify_line", "defect", "defect_three", "defect_two",
    "factor_fundamental", "generate", "hat_2m_nodes", "intersect", "is_gc", "line_profile",
    "line_through", "lowering", "maximal_lines", "node_classes", "principal_lattice", "run_checks",
    "usage_census", "used_line_catalog", "used_nodes_bruteforce", "used_nodes_pipeline",
]
