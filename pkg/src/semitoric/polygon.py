"""Rational convex polygons, possibly unbounded, stored by vertices and recession rays.

A polygon is one of

* bounded: a counterclockwise vertex cycle starting at the lexicographically
  smallest vertex, ``rays == ()``;
* an unbounded chain: ``rays == (r_in, r_out)``; the boundary is the half-line
  ``v0 + t*r_in`` (walked towards ``v0``), the vertex chain, then
  ``v_last + t*r_out``;
* a strip between two parallel lines: no vertices, ``lines`` holds two
  ``(anchor, direction)`` pairs, each walked with the interior on its left.

Build polygons with :func:`from_points`; the dataclass constructor does not
normalize.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import EmptyInterior, EmptySlice, NonConvexImage, PointNotOnBoundary, UnboundedSlice
from .exact_affine import (
    AffineMap,
    PiecewiseShear,
    Point,
    apply_affine,
    apply_tvec,
    det2,
    dot2,
    point,
    primitive,
    sub,
)

Vec = Tuple[int, int]


@dataclass(frozen=True)
class Edge:
    """A boundary piece walked counterclockwise; ``start``/``end`` are None at infinity."""

    start: Optional[Point]
    end: Optional[Point]
    direction: Vec
    anchor: Point

    def contains(self, p) -> bool:
        if det2(self.direction, sub(p, self.anchor)) != 0:
            return False
        t = dot2(self.direction, p)
        if self.start is not None and t < dot2(self.direction, self.start):
            return False
        if self.end is not None and t > dot2(self.direction, self.end):
            return False
        return True

    def interior_contains(self, p) -> bool:
        return self.contains(p) and p != self.start and p != self.end


@dataclass(frozen=True)
class VerticalSlice:
    lam: Fraction
    bottom: Optional[Point]
    top: Optional[Point]

    @property
    def is_bounded(self) -> bool:
        return self.bottom is not None and self.top is not None

    @property
    def length(self):
        if not self.is_bounded:
            return None
        return self.top[1] - self.bottom[1]


@dataclass(frozen=True)
class CornerBasis:
    z: Point
    u: Vec
    v: Vec


@dataclass(frozen=True)
class RationalPolygon:
    vertices: Tuple[Point, ...]
    rays: Tuple[Vec, ...] = ()
    lines: Tuple[Tuple[Point, Vec], ...] = ()

    # -- basic structure -------------------------------------------------

    def is_compact(self) -> bool:
        return not self.rays and not self.lines

    def is_strip(self) -> bool:
        return bool(self.lines)

    def edges(self) -> List[Edge]:
        return list(self._edges)

    @cached_property
    def _edges(self) -> Tuple[Edge, ...]:
        return tuple(self._build_edges())

    @cached_property
    def _halfplanes(self):
        return tuple((e.anchor, e.direction) for e in self._edges)

    def _build_edges(self) -> List[Edge]:
        if self.lines:
            return [Edge(None, None, d, a) for a, d in self.lines]
        vs = self.vertices
        out = []
        if self.rays:
            r_in, r_out = self.rays
            out.append(Edge(None, vs[0], (-r_in[0], -r_in[1]), vs[0]))
            for p, q in zip(vs, vs[1:]):
                out.append(Edge(p, q, primitive(sub(q, p)), p))
            out.append(Edge(vs[-1], None, r_out, vs[-1]))
            return out
        n = len(vs)
        for i in range(n):
            p, q = vs[i], vs[(i + 1) % n]
            out.append(Edge(p, q, primitive(sub(q, p)), p))
        return out

    def halfplanes(self):
        """``(anchor, direction)`` pairs; the polygon is where ``det(d, p - a) >= 0`` for all."""
        return list(self._halfplanes)

    @cached_property
    def _halfplanes_f(self):
        return tuple((float(a[0]), float(a[1]), d[0], d[1], abs(d[0]) + abs(d[1])) for a, d in self._halfplanes)

    def _float_side(self, x, y) -> int:
        """1 strictly inside, -1 strictly outside, 0 when floats cannot decide."""
        fx, fy = float(x), float(y)
        sure = True
        for ax, ay, dx, dy, n in self._halfplanes_f:
            v = dx * (fy - ay) - dy * (fx - ax)
            tol = 1e-12 * n * (1.0 + abs(fx) + abs(fy) + abs(ax) + abs(ay))
            if v < -tol:
                return -1
            if v <= tol:
                sure = False
        return 1 if sure else 0

    @cached_property
    def _halfplanes_int(self):
        # det(d, p - a) >= 0  <=>  dx*y - dy*x >= c  with c = dx*ay - dy*ax
        out = []
        for a, d in self._halfplanes:
            c = Fraction(d[0] * a[1] - d[1] * a[0])
            out.append((d[0], d[1], c.numerator, c.denominator))
        return tuple(out)

    def _exact_margins(self, x, y):
        nx, dx = x.numerator, x.denominator
        ny, dy = y.numerator, y.denominator
        for ex, ey, cn, cd in self._halfplanes_int:
            yield (ex * ny * dx - ey * nx * dy) * cd - cn * dx * dy

    def contains(self, p) -> bool:
        x, y = p
        side = self._float_side(x, y)
        if side:
            return side > 0
        return all(m >= 0 for m in self._exact_margins(x, y))

    def interior_contains(self, p) -> bool:
        x, y = p
        side = self._float_side(x, y)
        if side:
            return side > 0
        return all(m > 0 for m in self._exact_margins(x, y))

    def on_boundary(self, p) -> bool:
        return self.contains(p) and not self.interior_contains(p)

    def is_vertex(self, p) -> bool:
        return tuple(p) in self.vertices

    def x_range(self):
        """``(xmin, xmax)``, with None standing for an infinite end."""
        if self.lines:
            (a0, d), (a1, _) = self.lines
            if d[0] != 0:
                return (None, None)
            return (min(a0[0], a1[0]), max(a0[0], a1[0]))
        xs = [v[0] for v in self.vertices]
        lo, hi = min(xs), max(xs)
        for r in self.rays:
            if r[0] < 0:
                lo = None
            if r[0] > 0:
                hi = None
        return (lo, hi)

    def recession_contains(self, d) -> bool:
        """Whether direction ``d`` lies in the recession cone."""
        if self.lines:
            r = self.lines[0][1]
            return det2(r, d) == 0
        if not self.rays:
            return False
        r_in, r_out = self.rays
        if r_in == r_out:
            return det2(r_in, d) == 0 and dot2(r_in, d) > 0
        return det2(r_out, d) >= 0 and det2(d, r_in) >= 0

    def bbox(self):
        """Bounding box of the vertices (and anchors for strips)."""
        pts = list(self.vertices) or [a for a, _ in self.lines]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return (min(xs), max(xs), min(ys), max(ys))

    def area(self) -> Fraction:
        if not self.is_compact():
            raise ValueError("unbounded polygon has infinite area")
        vs = self.vertices
        s = sum(det2(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))
        return Fraction(s, 2)


# -- construction ---------------------------------------------------------


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> List[Point]:
    """Strict counterclockwise hull (Andrew's monotone chain, collinear points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    # the same hull on integer points scaled by the common denominator
    den = lcm(*(Fraction(c).denominator for p in pts for c in p))
    scaled = {(int(p[0] * den), int(p[1] * den)): p for p in pts}
    return [scaled[q] for q in _monotone_chain(sorted(scaled))]


def _monotone_chain(pts):
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _extreme(points, key):
    best = min(key(p) for p in points)
    return [p for p in points if key(p) == best]


def _recession(rays: Sequence[Vec]):
    """Classify the cone spanned by ``rays``: ('pointed', r_in, r_out) or ('line', r)."""
    rays = list(dict.fromkeys(rays))

    def bounds_all(r0, sign):
        for r in rays:
            d = sign * det2(r0, r)
            if d < 0 or (d == 0 and dot2(r0, r) < 0):
                return False
        return True

    outs = [r for r in rays if bounds_all(r, 1)]
    ins = [r for r in rays if bounds_all(r, -1)]
    if outs and ins:
        return ("pointed", ins[0], outs[0])
    r0 = rays[0]
    if all(det2(r0, r) == 0 for r in rays):
        return ("line", r0 if (r0[0], r0[1]) > (0, 0) else (-r0[0], -r0[1]))
    raise ValueError("recession cone must be pointed or a line (half-planes are not supported)")


def _drop_straight(chain: List[Point], d_in, d_out) -> List[Point]:
    """Remove chain points where the boundary does not turn."""
    out = []
    n = len(chain)
    for i, p in enumerate(chain):
        a = sub(p, chain[i - 1]) if i > 0 else d_in
        b = sub(chain[i + 1], p) if i < n - 1 else d_out
        if a is None or b is None or det2(a, b) != 0:
            out.append(p)
    return out


def from_points(points, rays=()) -> RationalPolygon:
    """Convex hull of ``points`` plus the cone spanned by ``rays``."""
    pts = [point(*p) for p in points]
    rays = [primitive(r) for r in rays]
    if not pts:
        raise EmptyInterior("no points")
    if not rays:
        hull = convex_hull(pts)
        if len(hull) < 3:
            raise EmptyInterior("hull is a point or a segment")
        i = hull.index(min(hull))
        return RationalPolygon(tuple(hull[i:] + hull[:i]))

    kind = _recession(rays)
    if kind[0] == "line":
        r = kind[1]
        top = max(pts, key=lambda p: det2(r, p))
        bot = min(pts, key=lambda p: det2(r, p))
        if det2(r, top) == det2(r, bot):
            raise EmptyInterior("points and rays span a single line")
        return _strip(top, bot, r)

    _, r_in, r_out = kind
    if r_in == r_out:
        s = [det2(r_in, p) for p in pts]
        if max(s) == min(s):
            raise EmptyInterior("points and ray span a half-line")
    a = min(_extreme(pts, lambda p: -det2(r_in, p)), key=lambda p: dot2(r_in, p))
    b = min(_extreme(pts, lambda p: det2(r_out, p)), key=lambda p: dot2(r_out, p))
    hull = convex_hull(pts)
    if len(hull) <= 2 and a != b:
        chain = [a, b]
    else:
        ia, ib = hull.index(a), hull.index(b)
        chain = [hull[ia]]
        i = ia
        while i != ib:
            i = (i + 1) % len(hull)
            chain.append(hull[i])
    chain = _drop_straight(chain, (-r_in[0], -r_in[1]), r_out)
    return RationalPolygon(tuple(chain), (r_in, r_out))


def _line_anchor(p, d) -> Point:
    """Canonical point on the line through ``p`` along ``d`` (x = 0 or y = 0)."""
    p = (Fraction(p[0]), Fraction(p[1]))
    if d[0] != 0:
        t = -p[0] / d[0]
        return (Fraction(0), p[1] + t * d[1])
    return (p[0], Fraction(0))


def _strip(top, bot, r) -> RationalPolygon:
    neg = (-r[0], -r[1])
    return RationalPolygon((), (), ((_line_anchor(top, r), neg), (_line_anchor(bot, r), r)))


def strip_from_lines(lines) -> RationalPolygon:
    """Rebuild a strip from two ``(point, direction)`` lines in any orientation."""
    (p, d), (q, _) = lines
    r = primitive(d)
    if (r[0], r[1]) < (0, 0):
        r = (-r[0], -r[1])
    if det2(r, p) > det2(r, q):
        return _strip(p, q, r)
    return _strip(q, p, r)


# -- queries --------------------------------------------------------------


def vertical_slice(P: RationalPolygon, lam) -> Optional[VerticalSlice]:
    """``P`` intersected with ``x = lam``; None when empty.

    An unbounded end is reported as None in the returned slice.
    """
    lam = Fraction(lam)
    lo = hi = None
    for a, d in P.halfplanes():
        dx, dy = d
        if dx == 0:
            if -dy * (lam - a[0]) < 0:
                return None
            continue
        y = a[1] + Fraction(dy) * (lam - a[0]) / dx
        if dx > 0:
            lo = y if lo is None else max(lo, y)
        else:
            hi = y if hi is None else min(hi, y)
    if lo is not None and hi is not None and lo > hi:
        return None
    return VerticalSlice(
        lam,
        None if lo is None else (lam, lo),
        None if hi is None else (lam, hi),
    )


def top_boundary_point(P: RationalPolygon, lam) -> Point:
    s = vertical_slice(P, lam)
    if s is None:
        raise EmptySlice(f"x = {lam} misses the polygon")
    if s.top is None or s.bottom is None:
        raise UnboundedSlice(f"slice at x = {lam} is not compact")
    return s.top


def corner_basis(P: RationalPolygon, z) -> CornerBasis:
    """Primitive edge directions leaving ``z``, ordered so that ``det(u, v) >= 0``.

    ``u`` follows the boundary counterclockwise, ``v`` goes back along it.
    """
    z = point(*z)
    edges = P.edges()
    outgoing = [e for e in edges if e.start == z]
    incoming = [e for e in edges if e.end == z]
    if outgoing and incoming:
        u = outgoing[0].direction
        d = incoming[0].direction
        return CornerBasis(z, u, (-d[0], -d[1]))
    for e in edges:
        if e.contains(z):
            d = e.direction
            return CornerBasis(z, d, (-d[0], -d[1]))
    raise PointNotOnBoundary(f"{z} is not on the boundary")


def is_compact(P: RationalPolygon) -> bool:
    return P.is_compact()


# -- mapping --------------------------------------------------------------


def _affine_image(P: RationalPolygon, f: AffineMap) -> RationalPolygon:
    if P.lines:
        return strip_from_lines([(apply_affine(f, a), f.linear @ d) for a, d in P.lines])
    return from_points([apply_affine(f, v) for v in P.vertices], [f.linear @ r for r in P.rays])


def _far_direction(ps: PiecewiseShear, p, r) -> Vec:
    if r[0] > 0:
        s = sum(n for _, n in ps.cuts)
    elif r[0] < 0:
        s = 0
    else:
        s = ps.slope_at(p[0])
    return primitive((r[0], r[1] + s * r[0]))


def _crossings(p, q, lams):
    """Points where segment p->q crosses the given vertical lines, in walking order."""
    lo, hi = min(p[0], q[0]), max(p[0], q[0])
    out = []
    for lam in lams:
        if lo < lam < hi:
            t = (lam - p[0]) / (q[0] - p[0])
            out.append((t, (lam, p[1] + t * (q[1] - p[1]))))
    out.sort()
    return [c for _, c in out]


def _candidate_cycle(P: RationalPolygon, ps: PiecewiseShear):
    """Boundary points with cut crossings inserted, mapped by ``ps``; plus mapped far rays."""
    lams = [lam for lam, _ in ps.cuts]
    vs = list(P.vertices)
    pts: List[Point] = []
    if P.rays:
        r_in, r_out = P.rays
        v0 = vs[0]
        if r_in[0] != 0:
            ts = sorted(
                ((lam - v0[0]) / r_in[0] for lam in lams if (lam - v0[0]) / r_in[0] > 0),
                reverse=True,
            )
            pts.extend((v0[0] + t * r_in[0], v0[1] + t * r_in[1]) for t in ts)
        for p, q in zip(vs, vs[1:]):
            pts.append(p)
            pts.extend(_crossings(p, q, lams))
        pts.append(vs[-1])
        vl = vs[-1]
        if r_out[0] != 0:
            ts = sorted((lam - vl[0]) / r_out[0] for lam in lams if (lam - vl[0]) / r_out[0] > 0)
            pts.extend((vl[0] + t * r_out[0], vl[1] + t * r_out[1]) for t in ts)
        rays = (_far_direction(ps, v0, r_in), _far_direction(ps, vl, r_out))
    else:
        n = len(vs)
        for i in range(n):
            pts.append(vs[i])
            pts.extend(_crossings(vs[i], vs[(i + 1) % n], lams))
        rays = ()
    return [apply_tvec(ps, p) for p in pts], rays


def _locally_convex(pts, rays) -> bool:
    n = len(pts)
    if rays:
        r_in, r_out = rays
        dirs = [(-r_in[0], -r_in[1])] + [sub(pts[i + 1], pts[i]) for i in range(n - 1)] + [r_out]
        pairs = zip(dirs, dirs[1:])
    else:
        dirs = [sub(pts[(i + 1) % n], pts[i]) for i in range(n)]
        pairs = zip(dirs, dirs[1:] + dirs[:1])
    for a, b in pairs:
        d = det2(a, b)
        if d < 0 or (d == 0 and dot2(a, b) < 0):
            return False
    return True


def is_convex_image(P: RationalPolygon, f) -> bool:
    if isinstance(f, AffineMap):
        return True
    if P.lines:
        return _strip_shear_ok(P, f)
    pts, rays = _candidate_cycle(P, f)
    return _locally_convex(pts, rays)


def _strip_shear_ok(P: RationalPolygon, f: PiecewiseShear) -> bool:
    # A non-vertical strip crosses every cut on both lines; a nonzero bend
    # turns one of the two lines the wrong way.
    d = P.lines[0][1]
    return d[0] == 0 or all(n == 0 for _, n in f.cuts)


def map_polygon(P: RationalPolygon, f) -> RationalPolygon:
    """Image of ``P`` under an affine map or a piecewise shear.

    Raises NonConvexImage when a piecewise shear breaks convexity.
    """
    if isinstance(f, AffineMap):
        return _affine_image(P, f)
    if f.is_identity():
        return P
    if P.lines:
        if not _strip_shear_ok(P, f):
            raise NonConvexImage("shear bends a non-vertical strip")
        return strip_from_lines([(apply_tvec(f, a), d) for a, d in P.lines])
    pts, rays = _candidate_cycle(P, f)
    if not _locally_convex(pts, rays):
        raise NonConvexImage("piecewise shear breaks convexity")
    return from_points(pts, rays)
