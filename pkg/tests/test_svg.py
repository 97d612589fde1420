import xml.etree.ElementTree as ET
from collections import Counter

from gcsets.gcset import maximal_lines, node_classes
from gcsets.svg import render_svg

from _instances import instance

NS = "{http://www.w3.org/2000/svg}"


def _group(root, cls):
    return next(g for g in root.iter(f"{NS}g") if g.get("class") == cls)


def test_svg_is_well_formed_and_complete():
    X = instance("defect-3", 5, 0)
    root = ET.fromstring(render_svg(X, title="defect-3 n=5"))
    assert root.find(f"{NS}title").text == "defect-3 n=5"
    circles = _group(root, "nodes").findall(f"{NS}circle")
    assert len(circles) == len(X)
    want = Counter(f"node-{min(v, 2)}m" for v in node_classes(X).values())
    assert Counter(c.get("class") for c in circles) == want
    # every line through a node crosses the padded bounding box
    assert len(_group(root, "maximal").findall(f"{NS}line")) == len(maximal_lines(X))
    assert len(_group(root, "proper").findall(f"{NS}line")) == 3
    assert len(_group(root, "legend").findall(f"{NS}circle")) == 3


def test_svg_deterministic():
    X = instance("principal", 4, 3)
    assert render_svg(X) == render_svg(instance("principal", 4, 3))
