"""SVG 1.1 pictures of weighted polygons, their nodes and cuts, and atlas charts."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .atlas import Atlas, _clip_polygon
from .ingredients import IngredientList
from .polygon import RationalPolygon, vertical_slice

MODEL_COLORS = {
    "Regular": "#9e9e9e",
    "Elliptic": "#1f77b4",
    "EllipticElliptic": "#2ca02c",
    "FocusFocus": "#d62728",
    "CutChart": "#ff7f0e",
}
MARGIN = 0.1


def num(x) -> str:
    s = format(float(x), ".12g")
    return "0" if s == "-0" else s


def drawing_box(P: RationalPolygon, extra_points: Sequence = ()):
    """Box used to draw ``P``; unbounded directions are cut two units past the data."""
    x0, x1, y0, y1 = P.bbox()
    for p in extra_points:
        x0, x1, y0, y1 = min(x0, p[0]), max(x1, p[0]), min(y0, p[1]), max(y1, p[1])
    if not P.is_compact():
        x0, x1, y0, y1 = x0 - 2, x1 + 2, y0 - 2, y1 + 2
    return x0, x1, y0, y1


def visible_region(P: RationalPolygon, box) -> List:
    x0, x1, y0, y1 = box
    return _clip_polygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], P)


def _node_and_cut(P, lam, h, sign, box) -> Optional[Tuple]:
    s = vertical_slice(P, lam)
    if s is None or s.bottom is None:
        return None
    c = (lam, s.bottom[1] + h)
    if sign > 0:
        end = s.top[1] if s.top is not None else box[3]
    else:
        end = s.bottom[1]
    return c, (lam, end)


class _Canvas:
    def __init__(self, box):
        x0, x1, y0, y1 = (float(v) for v in box)
        w, h = max(x1 - x0, 1e-9), max(y1 - y0, 1e-9)
        mx, my = MARGIN * w, MARGIN * h
        self.view = (x0 - mx, -(y1 + my), w + 2 * mx, h + 2 * my)
        self.stroke = 0.005 * max(w, h)
        self.items: List[str] = []

    @staticmethod
    def pt(p) -> str:
        # y is flipped so that up in the plane is up on the page
        return f"{num(p[0])},{num(-float(p[1]))}"

    def polygon(self, pts, **attrs):
        self.items.append(f'<polygon points="{" ".join(self.pt(p) for p in pts)}"{_attrs(attrs)}/>')

    def line(self, p, q, **attrs):
        self.items.append(
            f'<line x1="{num(p[0])}" y1="{num(-float(p[1]))}" x2="{num(q[0])}" y2="{num(-float(q[1]))}"{_attrs(attrs)}/>'
        )

    def dot(self, p, r, **attrs):
        self.items.append(f'<circle cx="{num(p[0])}" cy="{num(-float(p[1]))}" r="{num(r)}"{_attrs(attrs)}/>')

    def render(self) -> str:
        vb = " ".join(num(v) for v in self.view)
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vb}">\n'
        )
        return head + "".join(f"  {s}\n" for s in self.items) + "</svg>\n"


def _attrs(attrs) -> str:
    out = ""
    for k, v in attrs.items():
        v = num(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v
        out += f' {k.rstrip("_").replace("_", "-")}="{v}"'
    return out


def render_svg(L: IngredientList, atlas: Optional[Atlas] = None) -> str:
    """Outline, dashed lines at each lambda, node dots, cuts and optional chart boxes."""
    W = L.polygon.base
    P = W.polygon
    box = drawing_box(P)
    cv = _Canvas(box)
    sw = cv.stroke
    region = visible_region(P, box)
    cv.polygon(region, fill="#f4f1e8", stroke="#000000", stroke_width=sw)
    if atlas is not None:
        for ch in atlas.charts:
            color = MODEL_COLORS.get(ch.model, "#000000")
            for piece in ch.pieces():
                cv.polygon(piece.region(), fill=color, fill_opacity="0.12", stroke=color, stroke_width=sw / 2)
    for lam, h, eps in zip(W.lines, L.heights, W.signs):
        s = vertical_slice(P, lam)
        lo = s.bottom[1] if s is not None and s.bottom is not None else box[2]
        hi = s.top[1] if s is not None and s.top is not None else box[3]
        cv.line((lam, lo), (lam, hi), stroke="#555555", stroke_width=sw, stroke_dasharray=f"{num(4 * sw)} {num(3 * sw)}")
        nc = _node_and_cut(P, lam, h, eps, box)
        if nc is not None:
            c, end = nc
            cv.line(c, end, stroke="#d62728", stroke_width=2 * sw)
            cv.dot(c, 3 * sw, fill="#d62728")
    return cv.render()
