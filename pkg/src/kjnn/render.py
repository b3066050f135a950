"""SVG drawing of a topology over its point cloud."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .graph import PointCloud, UndirectedGraph

SVG_NS = "http://www.w3.org/2000/svg"


@dataclass(frozen=True)
class RenderOptions:
    size: int = 600
    margin: int = 12
    node_radius: float = 3.0
    stroke_width: float = 0.8
    node_fill: str = "#1f4e9c"
    edge_stroke: str = "#7a7a7a"
    background: str = "#ffffff"


def _num(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


def render_svg(cloud: PointCloud, g: UndirectedGraph, options: RenderOptions | None = None) -> str:
    """Unit square mapped onto a square canvas, y pointing up; edges drawn under nodes."""
    if cloud.n != g.n:
        raise ValueError(f"cloud has {cloud.n} nodes but graph has {g.n}")
    opt = options or RenderOptions()
    span = opt.size - 2 * opt.margin

    def to_canvas(x, y):
        return opt.margin + x * span, opt.margin + (1.0 - y) * span

    root = ET.Element(
        "svg",
        {
            "xmlns": SVG_NS,
            "width": str(opt.size),
            "height": str(opt.size),
            "viewBox": f"0 0 {opt.size} {opt.size}",
        },
    )
    ET.SubElement(root, "rect", {"width": "100%", "height": "100%", "fill": opt.background})
    edges = ET.SubElement(
        root, "g", {"id": "edges", "stroke": opt.edge_stroke, "stroke-width": _num(opt.stroke_width)}
    )
    pts = cloud.points.tolist()
    for u, v in g.edges.tolist():
        x1, y1 = to_canvas(*pts[u])
        x2, y2 = to_canvas(*pts[v])
        ET.SubElement(edges, "line", {"x1": _num(x1), "y1": _num(y1), "x2": _num(x2), "y2": _num(y2)})
    nodes = ET.SubElement(root, "g", {"id": "nodes", "fill": opt.node_fill})
    for i, (x, y) in enumerate(pts):
        cx, cy = to_canvas(x, y)
        ET.SubElement(nodes, "circle", {"id": f"n{i}", "cx": _num(cx), "cy": _num(cy), "r": _num(opt.node_radius)})
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"
