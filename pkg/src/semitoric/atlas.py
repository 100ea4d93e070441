"""Chart covers of a semitoric polygon, their transition maps and a checkable certificate.

Every chart is the image of the open cube ``(-rho, rho)^2`` under an integral
affine frame.  Its local model is read off from where the frame sits:

* Regular: inside the interior;
* Elliptic: centered on an edge, the edge being the image of ``y = 0``;
* EllipticElliptic: centered on a Delzant vertex, cone image of the quadrant;
* FocusFocus: centered on a node;
* CutChart: meets the vertical cut above a node.  Its frame lives in the
  unfolded polygon ``t_j(P)`` and is pulled back piecewise, so it has a
  left piece and a right piece.

Transitions are computed between overlapping pieces.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import ceil, floor
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    CutNotCovered,
    DegenerateGeometry,
    UndecomposableTransition,
    WindowRequired,
)
from .exact_affine import (
    IDENTITY,
    AffineMap,
    Mat2,
    PiecewiseShear,
    Point,
    Q,
    apply_affine,
    compose_affine,
    det2,
    dot2,
    invert_affine,
    shear,
    sub,
)
from .ingredients import IngredientList, _require_valid
from .polygon import RationalPolygon, corner_basis, map_polygon, vertical_slice
from .weighted import GroupElement, act_pondered

REGULAR = "Regular"
ELLIPTIC = "Elliptic"
ELLIPTIC_ELLIPTIC = "EllipticElliptic"
FOCUS_FOCUS = "FocusFocus"
CUT = "CutChart"

LETTER = {REGULAR: "R", ELLIPTIC: "E", ELLIPTIC_ELLIPTIC: "EE", FOCUS_FOCUS: "FF"}
_TAG_ORDER = {"FF": 0, "R": 1, "E": 2, "EE": 3}
ALLOWED_TAGS = ("RR", "RE", "REE", "EE", "EEE", "FFR")

RHO_FLOOR = Fraction(1, 4096)
MAX_HALVINGS = 3

Poly = List[Point]


# -- exact convex geometry ------------------------------------------------


def _clip(poly: Poly, a: Point, d) -> Poly:
    """Part of a convex polygon where ``det(d, p - a) >= 0``."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = det2(d, sub(p, a))
        fq = det2(d, sub(q, a))
        if fp >= 0:
            out.append(p)
        if (fp > 0 > fq) or (fp < 0 < fq):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _intersect(A: Poly, B: Poly) -> Poly:
    out = A
    n = len(B)
    for i in range(n):
        if len(out) < 3:
            return []
        p, q = B[i], B[(i + 1) % n]
        out = _clip(out, p, sub(q, p))
    return out if len(out) >= 3 else []


def _clip_f(poly, a, d):
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0])
        fq = d[0] * (q[1] - a[1]) - d[1] * (q[0] - a[0])
        if fp >= 0:
            out.append(p)
        if (fp > 0 > fq) or (fp < 0 < fq):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _area_f(poly) -> float:
    n = len(poly)
    return sum(poly[i][0] * poly[(i + 1) % n][1] - poly[i][1] * poly[(i + 1) % n][0] for i in range(n)) / 2


# Genuine overlaps here have areas far above this; anything smaller is redone exactly.
_AREA_TOL = 1e-9


def _overlap_positive(polys: Sequence[Poly], P: Optional[RationalPolygon] = None) -> bool:
    """Whether the common part of ``polys`` (and ``P``) has positive area."""
    out = [(float(x), float(y)) for x, y in polys[0]]
    for B in polys[1:]:
        B = [(float(x), float(y)) for x, y in B]
        for i in range(len(B)):
            if len(out) < 3:
                break
            p, q = B[i], B[(i + 1) % len(B)]
            out = _clip_f(out, p, (q[0] - p[0], q[1] - p[1]))
    if P is not None:
        for a, d in P.halfplanes():
            if len(out) < 3:
                break
            out = _clip_f(out, (float(a[0]), float(a[1])), d)
    if len(out) >= 3 and _area_f(out) > _AREA_TOL:
        return True
    for i, A in enumerate(polys):
        for B in polys[i + 1 :]:
            if _separated(A, B) or _separated(B, A):
                return False
    exact = list(polys[0])
    for B in polys[1:]:
        exact = _intersect(exact, B)
    if P is not None:
        exact = _clip_polygon(exact, P)
    return _area(exact) > 0


def _separated(A: Poly, B: Poly) -> bool:
    """Some edge line of the ccw polygon ``A`` has all of ``B`` on its closed outer side."""
    n = len(A)
    Af = [(float(x), float(y)) for x, y in A]
    Bf = [(float(x), float(y)) for x, y in B]
    for i in range(n):
        (ax, ay), (qx, qy) = Af[i], Af[(i + 1) % n]
        dx, dy = qx - ax, qy - ay
        scale = 1e-9 * (1.0 + abs(dx) + abs(dy)) * (1.0 + abs(ax) + abs(ay))
        if max(dx * (by - ay) - dy * (bx - ax) for bx, by in Bf) > scale:
            continue  # some vertex of B is plainly inside this edge's half-plane
        a, q = A[i], A[(i + 1) % n]
        d = sub(q, a)
        if all(det2(d, sub(b, a)) <= 0 for b in B):
            return True
    return False


def _clip_polygon(A: Poly, P: RationalPolygon) -> Poly:
    out = A
    for a, d in P.halfplanes():
        if len(out) < 3:
            return []
        out = _clip(out, a, d)
    return out if len(out) >= 3 else []


def _area(poly: Poly) -> Fraction:
    n = len(poly)
    return Fraction(sum(det2(poly[i], poly[(i + 1) % n]) for i in range(n)), 2) if n >= 3 else Fraction(0)


def _bbox(poly: Poly):
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    return (min(xs), max(xs), min(ys), max(ys))


def _bbox_overlap(a, b) -> bool:
    return a[0] < b[1] and b[0] < a[1] and a[2] < b[3] and b[2] < a[3]


def _fbox(box):
    return tuple(float(v) for v in box)


def _lt(fx, fy, x, y) -> bool:
    # floats of Fractions are correctly rounded, so only ties need exact arithmetic
    return fx < fy or (fx == fy and x < y)


def _boxes_meet(a, fa, b, fb) -> bool:
    """``_bbox_overlap(a, b)`` decided on the float copies ``fa``, ``fb`` where possible."""
    return (
        _lt(fa[0], fb[1], a[0], b[1])
        and _lt(fb[0], fa[1], b[0], a[1])
        and _lt(fa[2], fb[3], a[2], b[3])
        and _lt(fb[2], fa[3], b[2], a[3])
    )


def _x_section(poly: Poly, lam) -> Optional[Tuple[Fraction, Fraction]]:
    """``y``-range of a convex polygon on ``x = lam``; None unless ``lam`` is strictly inside."""
    xs = [p[0] for p in poly]
    if not min(xs) < lam < max(xs):
        return None
    ys = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        if (p[0] - lam) * (q[0] - lam) <= 0 and p[0] != q[0]:
            t = (lam - p[0]) / (q[0] - p[0])
            ys.append(p[1] + t * (q[1] - p[1]))
    return (min(ys), max(ys))


def _unshear(lam) -> AffineMap:
    """Inverse of the cut shear on the right of ``x = lam``: ``(x, y) -> (x, y - (x - lam))``."""
    return AffineMap(shear(-1), (Fraction(0), Q(lam)))


def _cut_shear(lam) -> AffineMap:
    return AffineMap(shear(1), (Fraction(0), -Q(lam)))


# -- charts -----------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    chart: int
    side: str  # "all", "left" or "right"
    map: AffineMap  # model coordinates -> polygon coordinates
    rho: Fraction
    lam: Optional[Fraction] = None

    @property
    def key(self) -> str:
        return str(self.chart) if self.side == "all" else f"{self.chart}{self.side[0].upper()}"

    def region(self) -> Poly:
        r = self.rho
        poly = [apply_affine(self.map, q) for q in ((-r, -r), (r, -r), (r, r), (-r, r))]
        if self.side == "left":
            poly = _clip(poly, (self.lam, 0), (0, 1))
        elif self.side == "right":
            poly = _clip(poly, (self.lam, 0), (0, -1))
        return poly

    def contains(self, p) -> bool:
        if self.side == "left" and p[0] > self.lam:
            return False
        if self.side == "right" and p[0] < self.lam:
            return False
        a, b, c, d, tx, ty, r, scale = self._float_inverse
        fx, fy = float(p[0]), float(p[1])
        m = max(abs(a * fx + b * fy + tx), abs(c * fx + d * fy + ty))
        tol = 1e-12 * scale * (1.0 + abs(fx) + abs(fy))
        if m < r - tol:
            return True
        if m > r + tol:
            return False
        q = apply_affine(self._inverse, p)
        return abs(q[0]) < self.rho and abs(q[1]) < self.rho

    @cached_property
    def _inverse(self) -> AffineMap:
        return invert_affine(self.map)

    @cached_property
    def _float_inverse(self):
        L, t = self._inverse.linear, self._inverse.translation
        tx, ty = float(t[0]), float(t[1])
        scale = (1 + abs(L.a) + abs(L.b) + abs(L.c) + abs(L.d)) * (1 + abs(tx) + abs(ty))
        return (L.a, L.b, L.c, L.d, tx, ty, float(self.rho), scale)


@dataclass(frozen=True)
class Chart:
    id: int
    center: Point
    rho: Fraction
    frame: AffineMap
    model: str
    unfolded: Optional[str] = None
    cut: Optional[int] = None
    lam: Optional[Fraction] = None
    special: bool = False
    partial: bool = False

    @property
    def letter(self) -> str:
        return LETTER[self.unfolded if self.model == CUT else self.model]

    def pieces(self) -> List[Piece]:
        if self.model != CUT:
            return [Piece(self.id, "all", self.frame, self.rho)]
        right = compose_affine(_unshear(self.lam), self.frame)
        return [
            Piece(self.id, "left", self.frame, self.rho, self.lam),
            Piece(self.id, "right", right, self.rho, self.lam),
        ]

    def contains(self, p) -> bool:
        return any(pc.contains(p) for pc in self.pieces())


class _Footprint:
    """Cached piece regions of a chart."""

    def __init__(self, chart: Chart):
        self.chart = chart
        pairs = [(pc, pc.region()) for pc in chart.pieces()]
        pairs = [(pc, r) for pc, r in pairs if len(r) >= 3]
        self.pieces = [pc for pc, _ in pairs]
        self.regions = [r for _, r in pairs]
        self.boxes = [_bbox(r) for r in self.regions]
        self.box = (
            min(b[0] for b in self.boxes),
            max(b[1] for b in self.boxes),
            min(b[2] for b in self.boxes),
            max(b[3] for b in self.boxes),
        )
        self.fbox = _fbox(self.box)
        self.fboxes = [_fbox(b) for b in self.boxes]

    def meets(self, other: "_Footprint") -> bool:
        return _boxes_meet(self.box, self.fbox, other.box, other.fbox)

    def contains(self, p) -> bool:
        return any(pc.contains(p) for pc in self.pieces)


# -- frames -----------------------------------------------------------------


def _hermite_completion(e) -> Tuple[int, int]:
    """``w`` with ``det(e, w) = 1`` and ``0 <= dot(e, w) < dot(e, e)``."""
    a, b = e
    # extended gcd on (a, b): find x, y with a*y - b*x = 1
    def egcd(p, q):
        if q == 0:
            return (p, 1, 0)
        g, s, t = egcd(q, p % q)
        return (g, t, s - (p // q) * t)

    g, s, t = egcd(a, -b)  # a*s + (-b)*t = g
    if g < 0:
        g, s, t = -g, -s, -t
    if g != 1:
        raise DegenerateGeometry(f"edge direction {e} is not primitive")
    w = (t, s)
    n = dot2(e, e)
    k = -(dot2(e, w) // n)
    return (w[0] + k * a, w[1] + k * b)


def _edge_completions(e, P: RationalPolygon) -> List[Tuple[int, int]]:
    w0 = _hermite_completion(e)
    ws = [w0]
    for j in (1, -1, 2, -2, 3, -3):
        ws.append((w0[0] + j * e[0], w0[1] + j * e[1]))
    return ws


def _corner_frames(P: RationalPolygon) -> Dict[Point, Mat2]:
    out = {}
    for v in P.vertices:
        B = corner_basis(P, v)
        if det2(B.u, B.v) == 1:
            out[v] = Mat2.from_columns(B.u, B.v)
    return out


@dataclass
class _Geometry:
    """Edge and corner frames of one polygon (the original or an unfolded one)."""

    P: RationalPolygon
    edges: list
    edge_frames: list  # (edge, [Mat2, ...])
    corner_frames: Dict[Point, Mat2]
    regular_frames: List[Mat2]

    @classmethod
    def of(cls, P: RationalPolygon) -> "_Geometry":
        edges = P.edges()
        edge_frames = [(e, [Mat2.from_columns(e.direction, w) for w in _edge_completions(e.direction, P)]) for e in edges]
        corners = _corner_frames(P)
        regular = [IDENTITY]
        for M in list(corners.values()) + [M for _, Ms in edge_frames for M in Ms[:3]]:
            if M not in regular:
                regular.append(M)
        return cls(P, edges, edge_frames, corners, regular)


# -- context ------------------------------------------------------------------


@dataclass
class _Cut:
    j: int
    lam: Fraction
    node: Point
    top: Point
    index: int
    unfolded: RationalPolygon
    geom: "_Geometry"


@dataclass
class _Context:
    L: IngredientList
    P: RationalPolygon
    geom: _Geometry
    cuts: List[_Cut]
    vertices: List[Point]
    window: Optional[Tuple[Fraction, Fraction, Fraction, Fraction]]

    @property
    def nodes(self) -> List[Point]:
        return [c.node for c in self.cuts]

    @property
    def tops(self) -> List[Point]:
        return [c.top for c in self.cuts]


def _all_plus(L: IngredientList) -> IngredientList:
    base = L.polygon.base
    return L.with_polygon(act_pondered(GroupElement(base.signs, 0), L.polygon))


def _context(L: IngredientList, window=None) -> _Context:
    _require_valid(L)
    L = _all_plus(L)
    W = L.polygon.base
    P = W.polygon
    cuts = []
    for j, (lam, h, k) in enumerate(zip(W.lines, L.heights, L.polygon.indices)):
        s = vertical_slice(P, lam)
        U = map_polygon(P, PiecewiseShear(((lam, 1),)))
        cuts.append(_Cut(j, lam, (lam, s.bottom[1] + h), s.top, k, U, _Geometry.of(U)))
    if window is not None:
        window = tuple(Q(x) for x in window)
        if not (window[0] < window[1] and window[2] < window[3]):
            raise ValueError("window must be x0 < x1, y0 < y1")
    return _Context(L, P, _Geometry.of(P), cuts, list(P.vertices), window)


def choose_rho(L: IngredientList, floor_: Fraction = RHO_FLOOR) -> Fraction:
    """A quarter of the smallest Chebyshev gap between vertices and nodes, and node-to-boundary gaps.

    The node-to-boundary gap is measured vertically: ``min(h, length - h)``.
    """
    ctx = _context(L)
    specials = ctx.vertices + ctx.nodes
    gaps = []
    for i, p in enumerate(specials):
        for q in specials[i + 1 :]:
            d = max(abs(p[0] - q[0]), abs(p[1] - q[1]))
            if d == 0:
                raise DegenerateGeometry(f"special points coincide at {p}")
            gaps.append(d)
    for c in ctx.cuts:
        s = vertical_slice(ctx.P, c.lam)
        gaps += [c.node[1] - s.bottom[1], s.top[1] - c.node[1]]
    if not gaps:
        # a polygon with no vertices and no nodes: a strip; use its width
        (a0, d), (a1, _) = ctx.P.lines
        gaps.append(abs(det2(d, sub(a1, a0))) / max(abs(d[0]), abs(d[1])))
    return max(min(gaps) / 4, floor_)


# -- validity of candidate charts ------------------------------------------------


class _Builder:
    def __init__(self, ctx: _Context, rho: Fraction):
        self.ctx = ctx
        self.rho = rho
        self.charts: List[Chart] = []
        self.prints: List[_Footprint] = []
        self.cell = 2 * rho
        self.buckets: Dict[Tuple[int, int], List[int]] = defaultdict(list)
        self.forbidden = ctx.vertices + ctx.nodes
        self.forbidden_f = [(float(z[0]), float(z[1])) for z in self.forbidden]

    # spatial hashing on bounding boxes
    def _cells(self, box):
        c = self.cell
        for i in range(floor(box[0] / c), floor(box[1] / c) + 1):
            for j in range(floor(box[2] / c), floor(box[3] / c) + 1):
                yield (i, j)

    def _near(self, box) -> List[int]:
        seen = set()
        for cell in self._cells(box):
            seen.update(self.buckets.get(cell, ()))
        return sorted(seen)

    def covered(self, p) -> bool:
        c = self.cell
        for i in self.buckets.get((floor(p[0] / c), floor(p[1] / c)), ()):
            if self.prints[i].contains(p):
                return True
        return False

    def _add(self, chart: Chart, fp: _Footprint):
        self.charts.append(chart)
        self.prints.append(fp)
        for cell in self._cells(fp.box):
            self.buckets[cell].append(len(self.charts) - 1)

    def _window_partial(self, fp: _Footprint) -> bool:
        w = self.ctx.window
        if w is None:
            return False
        b = fp.box
        return b[0] < w[0] or b[1] > w[1] or b[2] < w[2] or b[3] > w[3]

    def _clean(self, fp: _Footprint, allowed=(), own_cut: Optional[int] = None) -> bool:
        """No foreign vertex or node inside, and no foreign cut crossed."""
        x0, x1, y0, y1 = fp.fbox
        for z, (zx, zy) in zip(self.forbidden, self.forbidden_f):
            if x0 <= zx <= x1 and y0 <= zy <= y1 and z not in allowed and fp.contains(z):
                return False
        for c in self.ctx.cuts:
            if c.j == own_cut:
                continue
            lam, top, node = float(c.lam), float(c.top[1]), float(c.node[1])
            for reg, b in zip(fp.regions, fp.fboxes):
                if not (b[0] <= lam <= b[1] and b[2] <= top and b[3] >= node):
                    continue
                sec = _x_section(reg, c.lam)
                if sec is not None and sec[0] < c.top[1] and sec[1] > c.node[1]:
                    return False
        return True

    def _compatible(self, chart: Chart, fp: _Footprint) -> bool:
        P = self.ctx.P
        for i in self._near(fp.box):
            other = self.prints[i]
            if not fp.meets(other):
                continue
            for pa, ra, ba, fa in zip(fp.pieces, fp.regions, fp.boxes, fp.fboxes):
                for pb, rb, bb, fb in zip(other.pieces, other.regions, other.boxes, other.fboxes):
                    if not _boxes_meet(ba, fa, bb, fb):
                        continue
                    both = chart.special and other.chart.special
                    tag = _tag(chart.letter, other.chart.letter)
                    if not both and tag in ALLOWED_TAGS and tag not in ("EE", "EEE"):
                        continue
                    if not _overlap_positive((ra, rb), P):
                        continue
                    if both or tag not in ALLOWED_TAGS:
                        return False
                    if tag in ("EE", "EEE"):
                        try:
                            _decompose(tag, chart.letter, other.chart.letter, _delta(pa, pb))
                        except UndecomposableTransition:
                            return False
        return True

    def try_add(self, chart: Chart, allowed=(), own_cut=None) -> bool:
        fp = _Footprint(chart)
        if not fp.pieces or not self._clean(fp, allowed, own_cut):
            return False
        if not self._compatible(chart, fp):
            return False
        if self._window_partial(fp):
            chart = Chart(**{**chart.__dict__, "partial": True})
            fp = _Footprint(chart)
        self._add(chart, fp)
        return True

    # candidates ----------------------------------------------------------------

    def _next_id(self) -> int:
        return len(self.charts)

    def _clearly_crosses_cut(self, center, M: Mat2) -> bool:
        """Float test that only answers True when the footprint plainly straddles a cut."""
        cuts = self.__dict__.get("_cuts_f")
        if cuts is None:
            cuts = self._cuts_f = [(float(c.lam), float(c.node[1]), float(c.top[1])) for c in self.ctx.cuts]
        if not cuts:
            return False
        r = float(self.rho)
        cx, cy = float(center[0]), float(center[1])
        poly = [(cx + M.a * u + M.b * v, cy + M.c * u + M.d * v) for u, v in ((-r, -r), (r, -r), (r, r), (-r, r))]
        xs = [q[0] for q in poly]
        eps = 1e-9
        for lam, node, top in cuts:
            if not min(xs) + eps < lam < max(xs) - eps:
                continue
            ys = []
            for i in range(4):
                (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % 4]
                if (x0 - lam) * (x1 - lam) <= 0 and x0 != x1:
                    ys.append(y0 + (lam - x0) * (y1 - y0) / (x1 - x0))
            if ys and min(ys) < top - eps and max(ys) > node + eps:
                return True
        return False

    def regular(self, center, M: Mat2) -> Optional[Chart]:
        if self._clearly_crosses_cut(center, M):
            return None
        f = AffineMap(M, center)
        if not _corners_in(self.ctx.P, f, self.rho):
            return None
        return Chart(self._next_id(), f.translation, self.rho, f, REGULAR)

    def elliptic(self, center, M: Mat2) -> Optional[Chart]:
        f = AffineMap(M, center)
        if not _half_in(self.ctx.P, f, self.rho):
            return None
        return Chart(self._next_id(), f.translation, self.rho, f, ELLIPTIC)

    def cut_chart(self, cut: _Cut, center_u, M: Mat2, unfolded: str, special=False) -> Optional[Chart]:
        """A chart whose frame lives in the unfolded polygon of ``cut``."""
        f = AffineMap(M, center_u)
        U = cut.unfolded
        if unfolded == REGULAR:
            ok = _corners_in(U, f, self.rho)
        elif unfolded == ELLIPTIC:
            ok = _half_in(U, f, self.rho)
        else:
            ok = _corners_in(U, f, self.rho, lo=Fraction(0))
        if not ok:
            return None
        r = self.rho
        box = [apply_affine(f, q) for q in ((-r, -r), (r, -r), (r, r), (-r, r))]
        sec = _x_section(box, cut.lam)
        if sec is None or sec[0] < cut.node[1] or sec[0] >= cut.top[1]:
            return None
        center = f.translation
        if center[0] > cut.lam:
            center = apply_affine(_unshear(cut.lam), center)
        return Chart(self._next_id(), center, r, f, CUT, unfolded, cut.j, cut.lam, special)


def _tag(a: str, b: str) -> str:
    x, y = sorted((a, b), key=_TAG_ORDER.get)
    return x + y


def _delta(source: Piece, target: Piece) -> AffineMap:
    """Model coordinates of ``source`` to those of ``target``."""
    return compose_affine(invert_affine(target.map), source.map)


def _decompose(tag: str, src_letter: str, dst_letter: str, delta: AffineMap):
    """``(k, translation, orientation)`` of an edge-edge or edge-corner transition."""
    if tag == "EEE" and src_letter == "EE":
        d = _decompose(tag, dst_letter, src_letter, invert_affine(delta))
        return d[0], d[1], d[2]
    L, t = delta.linear, delta.translation
    if L.a == 1 and L.c == 0 and L.d == 1 and t[1] == 0:
        return L.b, t, "horizontal"
    if tag == "EEE" and L.a == 0 and L.b == 1 and L.c == -1 and t[0] == 0:
        return L.d, t, "vertical"
    raise UndecomposableTransition(f"{tag} transition {L.as_list()} + {t} is not a translation composed with a shear")


_FLOAT_OFFSETS: Dict[tuple, list] = {}


def _all_in(P: RationalPolygon, f: AffineMap, corners) -> bool:
    L, t = f.linear, f.translation
    key = (L, corners)
    offs = _FLOAT_OFFSETS.get(key)
    if offs is None:
        if len(_FLOAT_OFFSETS) > 4096:
            _FLOAT_OFFSETS.clear()
        offs = _FLOAT_OFFSETS[key] = [
            (L.a * float(q[0]) + L.b * float(q[1]), L.c * float(q[0]) + L.d * float(q[1])) for q in corners
        ]
    tx, ty = float(t[0]), float(t[1])
    for q, (ox, oy) in zip(corners, offs):
        side = P._float_side(ox + tx, oy + ty)
        if side < 0 or (side == 0 and not P.contains(apply_affine(f, q))):
            return False
    return True


def _corners_in(P: RationalPolygon, f: AffineMap, rho, lo=None) -> bool:
    lo = -rho if lo is None else lo
    return _all_in(P, f, ((lo, lo), (rho, lo), (rho, rho), (lo, rho)))


def _half_in(P: RationalPolygon, f: AffineMap, rho) -> bool:
    """Closed upper half of the footprint lies in ``P``."""
    return _all_in(P, f, ((-rho, 0), (rho, 0), (rho, rho), (-rho, rho)))


# -- cover search -------------------------------------------------------------


def _quarter_offsets(rho, pattern):
    return [(a * rho / 4, b * rho / 4) for a, b in pattern]


_AXIS_PATTERN = [(-3, -3), (0, -3), (-3, 0), (0, 0), (3, -3), (-3, 3), (3, 0), (0, 3), (3, 3)]
_FRAME_PATTERN = [(-2, -2), (2, -2), (-2, 2), (2, 2), (0, 0), (0, -3), (-3, 0), (3, 0), (0, 3)]
_EDGE_SHIFTS = (-3, 3, 0, -2, 2)


def _sample_points(ctx: _Context, rho) -> List[Point]:
    P = ctx.P
    if ctx.window is not None:
        x0, x1, y0, y1 = ctx.window
    elif P.is_compact():
        x0, x1, y0, y1 = P.bbox()
    else:
        raise WindowRequired("an unbounded polygon needs a window")
    step = rho / 2
    pts = set()
    for i in range(floor(x0 / step), floor(x1 / step) + 1):
        x = i * step
        if not x0 <= x <= x1:
            continue
        s = vertical_slice(P, x)
        if s is None:
            continue
        lo = y0 if s.bottom is None else max(y0, s.bottom[1])
        hi = y1 if s.top is None else min(y1, s.top[1])
        for j in range(ceil(lo / step), floor(hi / step) + 1):
            pts.add((x, j * step))
    for c in ctx.cuts:
        y = c.node[1] + step
        while y < c.top[1]:
            pts.add((c.lam, y))
            y += step
        pts.add(c.top)
    for z in ctx.vertices + ctx.nodes:
        pts.add(z)
    inside = lambda p: ctx.window is None or (
        ctx.window[0] <= p[0] <= ctx.window[1] and ctx.window[2] <= p[1] <= ctx.window[3]
    )
    return sorted((p for p in pts if inside(p)), key=lambda p: (p[1], p[0]))


def _neighbour_frames(z, M: Mat2, rho):
    u, v = M.columns()
    w = (u[0] + v[0], u[1] + v[1])
    return [
        (u, w, (z[0] + rho * u[0], z[1] + rho * u[1])),
        ((-v[0], -v[1]), w, (z[0] + rho * v[0], z[1] + rho * v[1])),
    ]


class _Search(_Builder):
    def specials(self) -> bool:
        ctx, rho = self.ctx, self.rho
        tops = set(ctx.tops)
        for z in ctx.vertices:
            if z in tops:
                continue
            M = ctx.geom.corner_frames.get(z)
            if M is None:
                raise DegenerateGeometry(f"vertex {z} has no Delzant frame")
            f = AffineMap(M, z)
            ch = Chart(self._next_id(), z, rho, f, ELLIPTIC_ELLIPTIC, special=True)
            if not _corners_in(ctx.P, f, rho, lo=Fraction(0)) or not self.try_add(ch, allowed=(z,)):
                return False
        for c in ctx.cuts:
            f = AffineMap(shear(c.index), c.node)
            ch = Chart(self._next_id(), c.node, rho, f, FOCUS_FOCUS, cut=c.j, special=True)
            if not _corners_in(ctx.P, f, rho) or not self.try_add(ch, allowed=(c.node,), own_cut=c.j):
                return False
        for c in ctx.cuts:
            if not self._top_chart(c):
                return False
        self._corner_neighbours()
        return True

    def _corner_neighbours(self):
        """Edge charts on both sides of every corner chart, leaning along ``u + v``.

        Greedy placement alone can box a corner in with edge charts from the two
        edges overlapping each other; these two frames keep them apart.
        """
        ctx, rho = self.ctx, self.rho
        tops = set(ctx.tops)
        for z, M in ctx.geom.corner_frames.items():
            if z in tops:
                continue
            for e, w, c in _neighbour_frames(z, M, rho):
                ch = self.elliptic(c, Mat2.from_columns(e, w))
                if ch is not None:
                    self.try_add(ch)
        for cut in ctx.cuts:
            M = cut.geom.corner_frames.get(cut.top)
            if M is None or cut.top not in cut.unfolded.vertices:
                continue
            for e, w, c in _neighbour_frames(cut.top, M, rho):
                F = Mat2.from_columns(e, w)
                ch = self.cut_chart(cut, c, F, ELLIPTIC)
                if ch is not None and self.try_add(ch, own_cut=cut.j):
                    continue
                if c[0] > cut.lam:
                    g = compose_affine(_unshear(cut.lam), AffineMap(F, c))
                    ch = self.elliptic(g.translation, g.linear)
                else:
                    ch = self.elliptic(c, F)
                if ch is not None:
                    self.try_add(ch)

    def _top_chart(self, c: _Cut) -> bool:
        z = c.top
        U = c.unfolded
        if z in U.vertices:
            M = c.geom.corner_frames.get(z)
            frames = [(M, ELLIPTIC_ELLIPTIC)] if M is not None else []
        else:
            frames = [(M, ELLIPTIC) for e, Ms in c.geom.edge_frames if e.contains(z) for M in Ms]
        for M, kind in frames:
            ch = self.cut_chart(c, z, M, kind, special=True)
            if ch is not None and self.try_add(ch, allowed=(z,), own_cut=c.j):
                return True
        return False

    def cover_point(self, p) -> bool:
        """Place one chart containing ``p``; centers further along the scan are tried first."""
        ctx, rho = self.ctx, self.rho
        later = lambda c: (-float(c[0][1]), -float(c[0][0]))
        # regular charts in the polygon itself
        for M in ctx.geom.regular_frames:
            cands = [((p[0] - mq[0], p[1] - mq[1]), M) for mq in self._offsets(M)]
            for cen, M in sorted(cands, key=later):
                ch = self.regular(cen, M)
                if ch is not None and self.try_add(ch):
                    return True
        # edge charts: p has model coordinates (a, b) with 0 <= b < rho
        for e, Ms in ctx.geom.edge_frames:
            b = det2(e.direction, sub(p, e.anchor))
            if not 0 <= b < rho:
                continue
            cands = []
            for M in Ms:
                w = M.columns()[1]
                for s in _EDGE_SHIFTS:
                    a = s * rho / 4
                    cen = (p[0] - b * w[0] - a * e.direction[0], p[1] - b * w[1] - a * e.direction[1])
                    if e.contains(cen):
                        cands.append((cen, M))
            for cen, M in sorted(cands, key=later):
                ch = self.elliptic(cen, M)
                if ch is not None and self.try_add(ch):
                    return True
        # charts meeting a cut, framed in the unfolded polygon
        for c in ctx.cuts:
            pu = p if p[0] <= c.lam else apply_affine(_cut_shear(c.lam), p)
            for M in c.geom.regular_frames:
                cands = [((pu[0] - mq[0], pu[1] - mq[1]), M) for mq in self._offsets(M)]
                for cen, M in sorted(cands, key=later):
                    ch = self.cut_chart(c, cen, M, REGULAR)
                    if ch is not None and self.try_add(ch, own_cut=c.j):
                        return True
        return False

    def _offsets(self, M: Mat2):
        """``M`` applied to the offset pattern of its kind, cached per frame."""
        cache = self.__dict__.setdefault("_offset_cache", {})
        if M not in cache:
            qs = _quarter_offsets(self.rho, _AXIS_PATTERN if M == IDENTITY else _FRAME_PATTERN)
            cache[M] = [M @ q for q in qs]
        return cache[M]


def _attempt(ctx: _Context, rho):
    s = _Search(ctx, rho)
    if not s.specials():
        return None, "special charts overlap or do not fit"
    for p in _sample_points(ctx, rho):
        if not s.covered(p) and not s.cover_point(p):
            return None, f"no admissible chart covers {p}"
    return s, None


def _search(ctx: _Context, rho=None):
    rho = Q(rho) if rho is not None else choose_rho(ctx.L)
    if not ctx.P.is_compact() and ctx.window is None:
        raise WindowRequired("an unbounded polygon needs a window")
    why = None
    for _ in range(MAX_HALVINGS + 1):
        s, why = _attempt(ctx, rho)
        if s is not None:
            return s
        rho /= 2
    raise DegenerateGeometry(f"cover search failed down to rho = {rho * 2}: {why}")


def build_cover(L: IngredientList, window=None, rho=None) -> List[Chart]:
    """Charts covering the polygon (inside ``window`` when unbounded).

    ``rho`` defaults to :func:`choose_rho` and is halved when no cover is
    found at that size.
    """
    return _search(_context(L, window), rho).charts


# -- transitions --------------------------------------------------------------


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    case_tag: str
    frame_delta: AffineMap
    shear_k: Optional[int] = None
    translation: Optional[Point] = None
    orientation: Optional[str] = None
    # footprints of the source and target pieces; their common part is the overlap
    regions: Tuple[Poly, Poly] = ((), ())


def _piece_order(key: str):
    side = key[-1] if key[-1] in "LR" else ""
    return (int(key[:-1] if side else key), side)


def _candidate_pairs(prints: Sequence["_Footprint"]) -> List[Tuple[int, int]]:
    """Index pairs ``i < j`` whose bounding boxes overlap, found by grid hashing."""
    if not prints:
        return []
    cell = max(max(fp.fbox[1] - fp.fbox[0], fp.fbox[3] - fp.fbox[2]) for fp in prints)
    grid = defaultdict(list)
    for i, fp in enumerate(prints):
        x0, x1, y0, y1 = fp.fbox
        for a in range(floor(x0 / cell), floor(x1 / cell) + 1):
            for b in range(floor(y0 / cell), floor(y1 / cell) + 1):
                grid[(a, b)].append(i)
    pairs = set()
    for members in grid.values():
        for n, i in enumerate(members):
            for j in members[n + 1 :]:
                pairs.add((i, j) if i < j else (j, i))
    return [(i, j) for i, j in sorted(pairs) if prints[i].meets(prints[j])]


def transitions(charts: Sequence[Chart], polygon: Optional[RationalPolygon] = None) -> List[Transition]:
    """One transition per ordered pair of pieces whose footprints overlap (inside ``polygon`` if given)."""
    prints = [_Footprint(c) for c in charts]
    out = []
    for i, j in _candidate_pairs(prints):
        fa, fb = prints[i], prints[j]
        for pa, ra, ba, xa in zip(fa.pieces, fa.regions, fa.boxes, fa.fboxes):
            for pb, rb, bb, xb in zip(fb.pieces, fb.regions, fb.boxes, fb.fboxes):
                if not _boxes_meet(ba, xa, bb, xb):
                    continue
                if not _overlap_positive((ra, rb), polygon):
                    continue
                la, lb = fa.chart.letter, fb.chart.letter
                tag = _tag(la, lb)
                if tag not in ALLOWED_TAGS:
                    raise UndecomposableTransition(f"charts {fa.chart.id} and {fb.chart.id} overlap as {tag}")
                for (s, ls), (t, lt) in (((pa, la), (pb, lb)), ((pb, lb), (pa, la))):
                    d = _delta(s, t)
                    k = u = orient = None
                    if tag in ("EE", "EEE"):
                        k, u, orient = _decompose(tag, ls, lt, d)
                    regions = (ra, rb) if s is pa else (rb, ra)
                    out.append(Transition(s.key, t.key, tag, d, k, u, orient, regions))
    return out


@dataclass
class CocycleResult:
    ok: bool
    witness: Optional[Tuple[str, ...]] = None
    pairs_checked: int = 0
    triples_checked: int = 0

    def __bool__(self):
        return self.ok


def verify_cocycle(trans: Sequence[Transition], polygon: Optional[RationalPolygon] = None) -> CocycleResult:
    """Inverse pairs first, then ``d_ca o d_bc o d_ab = id`` on every triple with a common overlap.

    With ``polygon`` the triple overlap only counts where it meets the polygon.
    """
    by = {(t.source, t.target): t for t in trans}
    res = CocycleResult(True)
    for (s, t), tr in sorted(by.items()):
        back = by.get((t, s))
        res.pairs_checked += 1
        if back is None or back.frame_delta != invert_affine(tr.frame_delta):
            res.ok, res.witness = False, (s, t)
            return res
    adj = defaultdict(set)
    for s, t in by:
        adj[s].add(t)
    order = _piece_order
    for a in sorted(adj, key=order):
        for b in sorted((x for x in adj[a] if order(x) > order(a)), key=order):
            ab = by[(a, b)]
            for c in sorted((x for x in adj[a] & adj[b] if order(x) > order(b)), key=order):
                bc = by[(b, c)]
                if not _overlap_positive((ab.regions[0], ab.regions[1], bc.regions[1]), polygon):
                    continue
                res.triples_checked += 1
                ca = by[(c, a)]
                loop = compose_affine(ca.frame_delta, compose_affine(bc.frame_delta, ab.frame_delta))
                if not loop.is_identity():
                    res.ok, res.witness = False, (a, b, c)
                    return res
    return res


# -- cuts -----------------------------------------------------------------------


def _classify_unfolded(ch: Chart, U: RationalPolygon) -> str:
    f, r = ch.frame, ch.rho
    z = f.translation
    if z in U.vertices and _corners_in(U, f, r, lo=Fraction(0)):
        return ELLIPTIC_ELLIPTIC
    if U.on_boundary(z) and _half_in(U, f, r):
        return ELLIPTIC
    if _corners_in(U, f, r):
        return REGULAR
    raise DegenerateGeometry(f"cut chart {ch.id} fits no local model of the unfolded polygon")


def _cut_samples(c: _Cut, rho) -> List[Point]:
    step = rho / 2
    pts = []
    y = c.node[1] + step
    while y < c.top[1]:
        pts.append((c.lam, y))
        y += step
    return pts + [c.top]


def unfold_cuts(L: IngredientList, charts: Sequence[Chart]) -> List[Chart]:
    """Re-derive the local model of every cut chart inside its unfolded polygon ``t_j(P)``."""
    ctx = _context(L)
    out = []
    for ch in charts:
        if ch.model != CUT:
            continue
        U = ctx.cuts[ch.cut].unfolded
        out.append(Chart(**{**ch.__dict__, "unfolded": _classify_unfolded(ch, U)}))
    for c in ctx.cuts:
        mine = [ch for ch in charts if ch.cut == c.j and ch.model in (CUT, FOCUS_FOCUS)]
        if not any(ch.model == CUT for ch in mine):
            raise CutNotCovered(f"no cut chart on cut {c.j}")
        rho = mine[0].rho
        for p in _cut_samples(c, rho):
            if not any(ch.contains(p) for ch in mine):
                raise CutNotCovered(f"cut {c.j} point {p} is not covered")
    return out


# -- atlas checks and certificate ------------------------------------------------


@dataclass(frozen=True)
class _CutRef:
    j: int
    lam: Fraction
    node: Point
    top: Point


@dataclass
class _Scene:
    """What a certificate needs to be rechecked: polygon, cuts, window."""

    P: RationalPolygon
    cuts: List[_CutRef]
    window: Optional[Tuple[Fraction, Fraction, Fraction, Fraction]]

    @property
    def vertices(self) -> List[Point]:
        return list(self.P.vertices)

    @property
    def nodes(self) -> List[Point]:
        return [c.node for c in self.cuts]

    @property
    def tops(self) -> List[Point]:
        return [c.top for c in self.cuts]


def _scene(ctx: _Context) -> _Scene:
    return _Scene(ctx.P, [_CutRef(c.j, c.lam, c.node, c.top) for c in ctx.cuts], ctx.window)


class _Index:
    def __init__(self, charts: Sequence[Chart], cell):
        self.prints = [_Footprint(c) for c in charts]
        self.cell = cell
        self.buckets = defaultdict(list)
        for i, fp in enumerate(self.prints):
            for a in range(floor(fp.box[0] / cell), floor(fp.box[1] / cell) + 1):
                for b in range(floor(fp.box[2] / cell), floor(fp.box[3] / cell) + 1):
                    self.buckets[(a, b)].append(i)

    def containing(self, p) -> List[int]:
        key = (floor(p[0] / self.cell), floor(p[1] / self.cell))
        return [i for i in self.buckets.get(key, ()) if self.prints[i].contains(p)]


def _coverage(scene: _Scene, charts: Sequence[Chart], rho):
    """``(ok, first uncovered point, max depth)`` over the pitch ``rho/2`` samples."""
    idx = _Index(charts, 2 * rho)
    depth = 0
    for p in _sample_points(scene, rho):
        n = len(idx.containing(p))
        if n == 0:
            return False, p, depth
        depth = max(depth, n)
    return True, None, depth


def _specials_ok(scene: _Scene, charts: Sequence[Chart]):
    """Special charts pairwise disjoint inside the polygon; each vertex and node in exactly one chart."""
    specials = [_Footprint(c) for c in charts if c.special]
    disjoint = True
    for i, fa in enumerate(specials):
        for fb in specials[i + 1 :]:
            if not _bbox_overlap(fa.box, fb.box):
                continue
            for ra in fa.regions:
                for rb in fb.regions:
                    if _overlap_positive((ra, rb), scene.P):
                        disjoint = False
    rho = charts[0].rho if charts else Fraction(1)
    idx = _Index(charts, 2 * rho)
    unique = all(len(idx.containing(z)) == 1 for z in scene.vertices + scene.nodes)
    return disjoint, unique


def _census(charts: Sequence[Chart], scene: _Scene) -> dict:
    models = Counter(c.model for c in charts)
    unfolded = Counter(c.unfolded for c in charts if c.model == CUT)
    per_cut = Counter(c.cut for c in charts if c.model == CUT)
    return {
        "models": {m: models.get(m, 0) for m in (REGULAR, ELLIPTIC, ELLIPTIC_ELLIPTIC, FOCUS_FOCUS, CUT)},
        "cut_unfolded": {m: unfolded.get(m, 0) for m in (REGULAR, ELLIPTIC, ELLIPTIC_ELLIPTIC)},
        "cut_charts_per_cut": [per_cut.get(c.j, 0) for c in scene.cuts],
        "delzant_corners": len(set(scene.vertices) - set(scene.tops)),
        "nodes": len(scene.cuts),
    }


def _cuts_covered(scene: _Scene, charts: Sequence[Chart], rho) -> bool:
    for c in scene.cuts:
        mine = [ch for ch in charts if ch.cut == c.j and ch.model in (CUT, FOCUS_FOCUS)]
        if not any(ch.model == CUT for ch in mine):
            return False
        for p in _cut_samples(c, rho):
            if not any(ch.contains(p) for ch in mine):
                return False
    return True


@dataclass
class Atlas:
    charts: List[Chart]
    transitions: List[Transition]
    rho: Fraction
    scene: _Scene
    coverage_ok: bool
    uncovered: Optional[Point]
    special_disjoint: bool
    special_unique: bool
    cocycle: CocycleResult
    census: dict
    cuts_covered: bool
    max_overlap_depth: int

    @property
    def cocycle_ok(self) -> bool:
        return self.cocycle.ok

    @property
    def census_ok(self) -> bool:
        m = self.census["models"]
        return (
            m[ELLIPTIC_ELLIPTIC] == self.census["delzant_corners"]
            and m[FOCUS_FOCUS] == self.census["nodes"]
            and all(n >= 1 for n in self.census["cut_charts_per_cut"])
        )

    @property
    def ok(self) -> bool:
        return (
            self.coverage_ok
            and self.special_disjoint
            and self.special_unique
            and self.cocycle_ok
            and self.cuts_covered
            and self.census_ok
        )

    @property
    def partial_charts(self) -> int:
        return sum(c.partial for c in self.charts)

    def summary(self) -> dict:
        return {
            "rho": str(self.rho),
            "charts": len(self.charts),
            "transitions": len(self.transitions),
            "coverage_ok": self.coverage_ok,
            "uncovered": None if self.uncovered is None else [str(x) for x in self.uncovered],
            "special_disjoint": self.special_disjoint,
            "special_unique": self.special_unique,
            "cocycle_ok": self.cocycle_ok,
            "cocycle_witness": list(self.cocycle.witness) if self.cocycle.witness else None,
            "triples_checked": self.cocycle.triples_checked,
            "cuts_covered": self.cuts_covered,
            "census": self.census,
            "census_ok": self.census_ok,
            "max_overlap_depth": self.max_overlap_depth,
            "partial_charts": self.partial_charts,
            "ok": self.ok,
        }

    def certificate(self) -> dict:
        return _certificate(self)


def build_atlas(L: IngredientList, window=None, rho=None) -> Atlas:
    ctx = _context(L, window)
    charts = _search(ctx, rho).charts
    return _assemble(_scene(ctx), charts)


def _assemble(scene: _Scene, charts: List[Chart], trans: Optional[List[Transition]] = None) -> Atlas:
    rho = charts[0].rho
    trans = transitions(charts, scene.P) if trans is None else trans
    cov, miss, depth = _coverage(scene, charts, rho)
    disjoint, unique = _specials_ok(scene, charts)
    return Atlas(
        charts,
        trans,
        rho,
        scene,
        cov,
        miss,
        disjoint,
        unique,
        verify_cocycle(trans, scene.P),
        _census(charts, scene),
        _cuts_covered(scene, charts, rho),
        depth,
    )


# certificate encoding


def _q(x) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pt(p):
    return [_q(p[0]), _q(p[1])]


def _aff(f: AffineMap) -> dict:
    return {"linear": f.linear.as_list(), "translation": _pt(f.translation)}


def _un_aff(d) -> AffineMap:
    (a, b), (c, e) = d["linear"]
    return AffineMap(Mat2(a, b, c, e), (Q(d["translation"][0]), Q(d["translation"][1])))


def _certificate(A: Atlas) -> dict:
    from .codec import enc_polygon

    s = A.scene
    return {
        "format": "semitoric-atlas-certificate",
        "version": 1,
        "polygon": enc_polygon(s.P),
        "cuts": [{"lambda": _q(c.lam), "node": _pt(c.node), "top": _pt(c.top)} for c in s.cuts],
        "window": None if s.window is None else [_q(x) for x in s.window],
        "rho": _q(A.rho),
        "charts": [
            {
                "id": c.id,
                "model": c.model,
                "unfolded": c.unfolded,
                "cut": c.cut,
                "lambda": None if c.lam is None else _q(c.lam),
                "center": _pt(c.center),
                "frame": _aff(c.frame),
                "special": c.special,
                "partial": c.partial,
            }
            for c in A.charts
        ],
        "transitions": [
            {
                "source": t.source,
                "target": t.target,
                "case_tag": t.case_tag,
                "frame_delta": _aff(t.frame_delta),
                "shear_k": t.shear_k,
                "translation": None if t.translation is None else _pt(t.translation),
                "orientation": t.orientation,
            }
            for t in A.transitions
        ],
        "report": A.summary(),
    }


@dataclass
class RecheckReport:
    ok: bool
    problems: List[str]
    summary: dict

    def __bool__(self):
        return self.ok


def recheck(cert: dict) -> RecheckReport:
    """Re-validate a certificate from its own data: no cover search is run."""
    from .codec import dec_polygon

    P = dec_polygon(cert["polygon"])
    cuts = [
        _CutRef(j, Q(c["lambda"]), (Q(c["node"][0]), Q(c["node"][1])), (Q(c["top"][0]), Q(c["top"][1])))
        for j, c in enumerate(cert["cuts"])
    ]
    window = None if cert.get("window") is None else tuple(Q(x) for x in cert["window"])
    scene = _Scene(P, cuts, window)
    rho = Q(cert["rho"])
    charts = [
        Chart(
            d["id"],
            (Q(d["center"][0]), Q(d["center"][1])),
            rho,
            _un_aff(d["frame"]),
            d["model"],
            d.get("unfolded"),
            d.get("cut"),
            None if d.get("lambda") is None else Q(d["lambda"]),
            bool(d.get("special")),
            bool(d.get("partial")),
        )
        for d in cert["charts"]
    ]
    problems = []
    fresh = {(t.source, t.target): t for t in transitions(charts, P)}
    stored = {}
    for d in cert["transitions"]:
        key = (d["source"], d["target"])
        delta = _un_aff(d["frame_delta"])
        if key not in fresh:
            problems.append(f"transition {key} has no overlap")
            continue
        f = fresh[key]
        if f.frame_delta != delta:
            problems.append(f"transition {key}: stored frame_delta differs from the charts")
        if f.case_tag != d["case_tag"]:
            problems.append(f"transition {key}: case tag {d['case_tag']} should be {f.case_tag}")
        if d.get("shear_k") != f.shear_k:
            problems.append(f"transition {key}: stored shear {d.get('shear_k')} should be {f.shear_k}")
        stored[key] = Transition(key[0], key[1], d["case_tag"], delta, d.get("shear_k"), None, d.get("orientation"), f.regions)
    for key in fresh:
        if key not in stored:
            problems.append(f"overlap {key} has no stored transition")
    A = _assemble(scene, charts, list(stored.values()))
    if not A.ok:
        problems.append("atlas checks fail: " + ", ".join(k for k, v in A.summary().items() if v is False))
    return RecheckReport(not problems, problems, A.summary())


# -- compactness --------------------------------------------------------------------


@dataclass
class CompactnessReport:
    polygon_compact: bool
    windowless_atlas_finite: bool
    atlas_consistent: Optional[bool]

    @property
    def agrees(self) -> bool:
        return self.polygon_compact == self.windowless_atlas_finite

    def as_dict(self) -> dict:
        return {
            "polygon_compact": self.polygon_compact,
            "windowless_atlas_finite": self.windowless_atlas_finite,
            "atlas_consistent": self.atlas_consistent,
            "agrees": self.agrees,
        }


def windowless_atlas_finite(L: IngredientList) -> bool:
    """Whether a finite cover exists with no window; unbounded polygons have none."""
    try:
        _sample_points(_scene(_context(L)), Fraction(1))
    except WindowRequired:
        return False
    return True


def compactness_report(L: IngredientList, atlas: Optional[Atlas] = None) -> CompactnessReport:
    from .ingredients import predicted_compactness

    compact = predicted_compactness(L)
    finite = windowless_atlas_finite(L)
    if atlas is None and finite:
        atlas = build_atlas(L)
    return CompactnessReport(compact, finite, None if atlas is None else atlas.ok)
