"""Static SVG rendering of a node set with its maximal and used lines.

Geometry is clipped exactly in rationals; only the final coordinates are
printed as decimals (6 significant digits), so the output is byte-stable.
"""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .gcset import NodeSetLike, as_context
from .geom import Line, Point
from .usage import MAXIMAL, PROPER, PROPER_MINUS, _classify

SIZE = 600
MARGIN = 40
LEGEND_HEIGHT = 90

NODE_COLORS = {0: "#7f7f7f", 1: "#1f77b4", 2: "#d62728"}
LINE_STYLES = {
    MAXIMAL: ('stroke="#000000" stroke-width="1.5"', "maximal line"),
    PROPER: ('stroke="#2ca02c" stroke-width="1.2" stroke-dasharray="8,5"', "proper line"),
    PROPER_MINUS: ('stroke="#9467bd" stroke-width="1.2" stroke-dasharray="2,4"', "used non-proper line"),
}


def _fmt(v: Fraction) -> str:
    s = f"{float(v):.6g}"
    return "0" if s == "-0" else s


def _clip(line: Line, box: tuple[Fraction, Fraction, Fraction, Fraction]) -> tuple[Point, Point] | None:
    """Segment of ``line`` inside the box ``(x0, y0, x1, y1)``, exactly."""
    x0, y0, x1, y1 = box
    a, b, c = Fraction(line.a), Fraction(line.b), Fraction(line.c)
    hits = set()
    if b != 0:
        for x in (x0, x1):
            y = -(a * x + c) / b
            if y0 <= y <= y1:
                hits.add(Point(x, y))
    if a != 0:
        for y in (y0, y1):
            x = -(b * y + c) / a
            if x0 <= x <= x1:
                hits.add(Point(x, y))
    if len(hits) < 2:
        return None
    pts = sorted(hits)
    return pts[0], pts[-1]


def render_svg(X: NodeSetLike, title: str | None = None) -> str:
    ctx = as_context(X)
    xs = [p.x for p in ctx.nodes]
    ys = [p.y for p in ctx.nodes]
    span = max(max(xs) - min(xs), max(ys) - min(ys), Fraction(1))
    pad = span / 10
    box = (min(xs) - pad, min(ys) - pad, min(xs) - pad + span + 2 * pad, min(ys) - pad + span + 2 * pad)
    scale = Fraction(SIZE - 2 * MARGIN) / (span + 2 * pad)

    def to_screen(p: Point) -> tuple[str, str]:
        sx = MARGIN + (p.x - box[0]) * scale
        sy = MARGIN + (box[3] - p.y) * scale
        return _fmt(sx), _fmt(sy)

    height = SIZE + LEGEND_HEIGHT
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{height}" '
        f'viewBox="0 0 {SIZE} {height}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<title>{escape(title)}</title>')
    groups = {MAXIMAL: [], PROPER: [], PROPER_MINUS: []}
    for line in ctx.masks:
        variant = _classify(ctx, line).variant
        if variant in groups:
            groups[variant].append(line)
    for variant in (PROPER_MINUS, PROPER, MAXIMAL):
        style, name = LINE_STYLES[variant]
        out.append(f'<g class="{variant}" fill="none" {style}>')
        for line in groups[variant]:
            seg = _clip(line, box)
            if seg is None:
                continue
            (ax, ay), (bx, by) = to_screen(seg[0]), to_screen(seg[1])
            out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
        out.append("</g>")
    counts = ctx.node_class_counts()
    out.append('<g class="nodes" stroke="#000000" stroke-width="0.8">')
    for i, p in enumerate(ctx.nodes):
        cx, cy = to_screen(p)
        k = min(counts[i], 2)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="5" fill="{NODE_COLORS[k]}" class="node-{k}m"/>')
    out.append("</g>")
    out.append(f'<g class="legend" font-family="sans-serif" font-size="12" transform="translate(0,{SIZE})">')
    for row, variant in enumerate((MAXIMAL, PROPER, PROPER_MINUS)):
        style, name = LINE_STYLES[variant]
        y = 20 + 22 * row
        out.append(f'<line x1="{MARGIN}" y1="{y}" x2="{MARGIN + 40}" y2="{y}" {style}/>')
        out.append(f'<text x="{MARGIN + 50}" y="{y + 4}">{name}</text>')
    for row, k in enumerate((0, 1, 2)):
        y = 20 + 22 * row
        out.append(f'<circle cx="{SIZE // 2 + 20}" cy="{y}" r="5" fill="{NODE_COLORS[k]}" stroke="#000000"/>')
        out.append(f'<text x="{SIZE // 2 + 32}" y="{y + 4}">{k}m-node</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
