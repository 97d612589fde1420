"""JSON round-trip for node sets (with construction provenance) and reports.

Rationals are written as ``"num/den"`` strings, points as ``[x, y]`` and lines
as ``[a, b, c]``; nothing is ever converted to float.  ``dumps`` fixes key
order and separators so equal inputs give byte-identical output.
"""

from __future__ import annotations

import json
from typing import Any

from .constructors import (
    CarnicerGascaSpec,
    Defect2Spec,
    Defect3Spec,
    GeneralPositionLines,
    GplSpec,
)
from .errors import GCError, MalformedInput
from .gcset import NodeSet, Provenance
from .geom import Line, Point, rat, rat_to_str


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def _points(data) -> tuple[Point, ...]:
    return tuple(Point.from_json(p) for p in data)


def _lines(data) -> tuple[Line, ...]:
    return tuple(Line.from_json(l) for l in data)


def _gpl_to_json(g: GeneralPositionLines) -> dict:
    return {"lines": [l.to_json() for l in g.lines], "seed": g.seed}


def _gpl_from_json(d: dict) -> GeneralPositionLines:
    return GeneralPositionLines(_lines(d["lines"]), d["seed"])


def spec_to_json(spec: Any) -> dict | None:
    if spec is None:
        return None
    if isinstance(spec, GeneralPositionLines):
        return _gpl_to_json(spec)
    if isinstance(spec, CarnicerGascaSpec):
        return {"maximal_seed_lines": _gpl_to_json(spec.maximal_seed_lines),
                "extra_nodes": [p.to_json() for p in spec.extra_nodes]}
    if isinstance(spec, Defect2Spec):
        return {"maximal_seed_lines": _gpl_to_json(spec.maximal_seed_lines),
                "center": spec.center.to_json(),
                "o_lines": [l.to_json() for l in spec.o_lines],
                "drop_choice": list(spec.drop_choice)}
    if isinstance(spec, Defect3Spec):
        return {"maximal_seed_lines": _gpl_to_json(spec.maximal_seed_lines),
                "d_nodes": [p.to_json() for p in spec.d_nodes],
                "o_nodes": [p.to_json() for p in spec.o_nodes]}
    if isinstance(spec, GplSpec):
        (m, t) = spec.transform
        return {"families": [[l.to_json() for l in fam] for fam in spec.families],
                "transform": {"matrix": [[rat_to_str(v) for v in row] for row in m],
                              "shift": [rat_to_str(v) for v in t]}}
    raise TypeError(f"cannot serialize provenance spec of type {type(spec).__name__}")


def spec_from_json(family: str, d: dict | None) -> Any:
    if d is None:
        return None
    if family == "chung-yao":
        return _gpl_from_json(d)
    if family == "carnicer-gasca":
        return CarnicerGascaSpec(_gpl_from_json(d["maximal_seed_lines"]), _points(d["extra_nodes"]))
    if family == "defect-2":
        return Defect2Spec(_gpl_from_json(d["maximal_seed_lines"]), Point.from_json(d["center"]),
                           _lines(d["o_lines"]), tuple(int(v) for v in d["drop_choice"]))
    if family == "defect-3":
        return Defect3Spec(_gpl_from_json(d["maximal_seed_lines"]), _points(d["d_nodes"]),
                           _points(d["o_nodes"]))
    if family == "principal":
        tr = d["transform"]
        m = tuple(tuple(rat(v) for v in row) for row in tr["matrix"])
        t = tuple(rat(v) for v in tr["shift"])
        return GplSpec(tuple(_lines(fam) for fam in d["families"]), (m, t))
    raise MalformedInput(f"unknown family {family!r} in provenance")


def nodeset_to_json(X: NodeSet) -> dict:
    out: dict[str, Any] = {"degree": X.degree, "nodes": [p.to_json() for p in X.nodes]}
    prov = X.provenance
    if prov is not None:
        out["provenance"] = {"family": prov.family, "degree": prov.degree, "seed": prov.seed,
                             "spec": spec_to_json(prov.spec)}
    return out


def nodeset_from_json(data: Any) -> NodeSet:
    """Parse and validate a node set document; any schema problem raises
    :class:`MalformedInput`."""
    try:
        if not isinstance(data, dict) or "nodes" not in data:
            raise MalformedInput("expected an object with a 'nodes' array")
        nodes = data["nodes"]
        if not isinstance(nodes, list) or not all(isinstance(p, list) and len(p) == 2 for p in nodes):
            raise MalformedInput("'nodes' must be a list of [x, y] pairs")
        for p in nodes:
            for v in p:
                if not isinstance(v, (str, int)) or isinstance(v, bool):
                    raise MalformedInput(f"coordinate {v!r} is not an exact rational")
        pts = _points(nodes)
        prov = None
        if data.get("provenance") is not None:
            pd = data["provenance"]
            prov = Provenance(pd["family"], int(pd["degree"]), pd.get("seed"),
                              spec_from_json(pd["family"], pd.get("spec")))
        X = NodeSet.from_points(pts, prov)
        if "degree" in data and data["degree"] != X.degree:
            raise MalformedInput(f"declared degree {data['degree']} but {len(pts)} nodes give {X.degree}")
        return X
    except MalformedInput:
        raise
    except (GCError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"{type(exc).__name__}: {exc}") from exc


def load_nodeset(path: str) -> NodeSet:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc})") from exc
    return nodeset_from_json(data)
