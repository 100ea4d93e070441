"""Weighted polygons, the sign/shear group action, corner tests and orbit canonicalization."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import (
    ComplexityTooLarge,
    NonConvexImage,
    NotAdmissible,
    NotCanonicalizable,
    SignsNotNormalized,
    UnboundedSlice,
)
from .exact_affine import PiecewiseShear, Q, T, det2, linear_map, shear
from .polygon import (
    RationalPolygon,
    corner_basis,
    is_convex_image,
    map_polygon,
    vertical_slice,
)

ADMISSIBILITY_CAP = 16


@dataclass(frozen=True)
class WeightedPolygon:
    polygon: RationalPolygon
    lines: Tuple[Fraction, ...] = ()
    signs: Tuple[int, ...] = ()

    def __post_init__(self):
        lines = tuple(Q(x) for x in self.lines)
        signs = tuple(int(e) for e in self.signs)
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "signs", signs)
        if len(lines) != len(signs):
            raise ValueError("lines and signs must have the same length")
        if any(e not in (1, -1) for e in signs):
            raise ValueError("signs must be +1 or -1")
        if any(a >= b for a, b in zip(lines, lines[1:])):
            raise ValueError("line abscissae must be strictly increasing")
        lo, hi = self.polygon.x_range()
        if lines and ((lo is not None and lines[0] <= lo) or (hi is not None and lines[-1] >= hi)):
            raise ValueError("lines must lie strictly inside the x-range of the polygon")

    @property
    def complexity(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class PonderedWeightedPolygon:
    base: WeightedPolygon
    indices: Tuple[int, ...] = ()

    def __post_init__(self):
        indices = tuple(int(k) for k in self.indices)
        object.__setattr__(self, "indices", indices)
        if len(indices) != self.base.complexity:
            raise ValueError("one twisting index per line is required")

    @property
    def complexity(self) -> int:
        return self.base.complexity


@dataclass(frozen=True)
class GroupElement:
    """An element ``(sign_flips, shear)`` of ``{+1,-1}^s x Z``."""

    sign_flips: Tuple[int, ...]
    shear: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sign_flips", tuple(int(e) for e in self.sign_flips))
        object.__setattr__(self, "shear", int(self.shear))

    @classmethod
    def identity(cls, s: int) -> "GroupElement":
        return cls((1,) * s, 0)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if len(self.sign_flips) != len(other.sign_flips):
            raise ValueError("group elements of different complexity")
        return GroupElement(
            tuple(a * b for a, b in zip(self.sign_flips, other.sign_flips)),
            self.shear + other.shear,
        )

    def inverse(self) -> "GroupElement":
        return GroupElement(self.sign_flips, -self.shear)


# -- action ---------------------------------------------------------------


def act(g: GroupElement, W: WeightedPolygon) -> WeightedPolygon:
    """``(flips, k) . (P, lines, signs) = (t_u(T^k P), lines, flips*signs)``.

    ``u_j = (old_j - new_j) / 2``: turning an upward cut downward shears by
    ``t^{+1}``, the reverse by ``t^{-1}``.
    """
    if len(g.sign_flips) != W.complexity:
        raise ValueError("sign_flips length does not match the complexity")
    new = tuple(f * e for f, e in zip(g.sign_flips, W.signs))
    u = [(e - n) // 2 for e, n in zip(W.signs, new)]
    P = W.polygon
    if g.shear:
        P = map_polygon(P, linear_map(shear(g.shear)))
    P = map_polygon(P, PiecewiseShear.from_pairs(zip(W.lines, u)))
    return WeightedPolygon(P, W.lines, new)


def act_pondered(g: GroupElement, PW: PonderedWeightedPolygon) -> PonderedWeightedPolygon:
    return PonderedWeightedPolygon(act(g, PW.base), tuple(k + g.shear for k in PW.indices))


def all_plus(W: WeightedPolygon) -> WeightedPolygon:
    """The representative of the G_s-orbit with every sign +1."""
    return act(GroupElement(W.signs, 0), W)


def is_admissible(W: WeightedPolygon, cap: int = ADMISSIBILITY_CAP) -> bool:
    """Brute force: every sign flip keeps the polygon convex."""
    s = W.complexity
    if s > cap:
        raise ComplexityTooLarge(f"complexity {s} exceeds the cap {cap}")
    for flips in itertools.product((1, -1), repeat=s):
        u = [(e - f * e) // 2 for f, e in zip(flips, W.signs)]
        if not is_convex_image(W.polygon, PiecewiseShear.from_pairs(zip(W.lines, u))):
            return False
    return True


# -- corners --------------------------------------------------------------


class CornerKind(enum.Enum):
    DELZANT = "DelzantCorner"
    HIDDEN_DELZANT = "HiddenDelzantCorner"
    FAKE = "FakeCorner"
    NON_VERTEX_ON_LINE = "NonVertexOnLine"
    VIOLATION = "Violation"


@dataclass(frozen=True)
class CornerClass:
    kind: CornerKind
    z: tuple
    det: Optional[int] = None
    reason: str = ""

    def __str__(self):
        x, y = self.z
        extra = f" det={self.det}" if self.det is not None else ""
        why = f" ({self.reason})" if self.reason else ""
        return f"({x}, {y}): {self.kind.value}{extra}{why}"


def _top_of(P: RationalPolygon, lam):
    s = vertical_slice(P, lam)
    if s is None or not s.is_bounded or s.bottom == s.top:
        return None
    return s.top


def classify_corner(W: WeightedPolygon, z) -> CornerClass:
    if any(e != 1 for e in W.signs):
        raise SignsNotNormalized("corner classification needs the all-plus representative")
    P = W.polygon
    z = (Q(z[0]), Q(z[1]))
    B = corner_basis(P, z)
    vertex = P.is_vertex(z)
    on_line = z[0] in W.lines
    if on_line:
        top = _top_of(P, z[0]) == z
        if not top:
            if vertex:
                return CornerClass(CornerKind.VIOLATION, z, det2(B.u, B.v), "line through a vertex off the top boundary")
            return CornerClass(CornerKind.VIOLATION, z, None, "not a vertex or top-boundary line point")
        d = det2(B.u, T @ B.v)
        if not vertex:
            return CornerClass(CornerKind.NON_VERTEX_ON_LINE, z, d)
        if d == 1:
            return CornerClass(CornerKind.HIDDEN_DELZANT, z, d)
        if d == 0:
            return CornerClass(CornerKind.FAKE, z, d)
        return CornerClass(CornerKind.VIOLATION, z, d, "det(u, Tv) not in {0, 1}")
    if not vertex:
        return CornerClass(CornerKind.VIOLATION, z, None, "not a vertex")
    d = det2(B.u, B.v)
    if d == 1:
        return CornerClass(CornerKind.DELZANT, z, d)
    return CornerClass(CornerKind.VIOLATION, z, d, "det(u, v) != 1")


@dataclass
class DelzantReport:
    ok: bool
    corners: List[CornerClass] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def __str__(self):
        lines = [f"delzant semitoric: {str(self.ok).lower()}"]
        lines += ["  " + str(c) for c in self.corners]
        lines += ["  failure: " + f for f in self.failures]
        return "\n".join(lines)


def is_delzant_semitoric(W: WeightedPolygon) -> DelzantReport:
    try:
        Wp = all_plus(W)
    except NonConvexImage:
        return DelzantReport(False, [], ["all-plus representative is not convex"])
    P = Wp.polygon
    rep = DelzantReport(True)
    if P.recession_contains((0, 1)) or P.recession_contains((0, -1)):
        rep.ok = False
        rep.failures.append("(a1) some vertical slice is unbounded")
        return rep
    tops = []
    for lam in Wp.lines:
        top = _top_of(P, lam)
        if top is None:
            rep.ok = False
            rep.failures.append(f"(a2) line x={lam} does not meet the top boundary")
            continue
        tops.append(top)
        c = classify_corner(Wp, top)
        rep.corners.append(c)
        if c.kind not in (CornerKind.HIDDEN_DELZANT, CornerKind.FAKE):
            rep.ok = False
            rep.failures.append(f"top of line x={lam}: {c.kind.value}")
    for v in P.vertices:
        if v in tops:
            continue
        c = classify_corner(Wp, v)
        rep.corners.append(c)
        if c.kind is not CornerKind.DELZANT:
            rep.ok = False
            rep.failures.append(f"vertex {v[0]}, {v[1]}: {c.kind.value}")
    rep.corners.sort(key=lambda c: c.z)
    return rep


# -- orbits ---------------------------------------------------------------


def _direction_list(P: RationalPolygon):
    if P.lines:
        return [d for _, d in P.lines]
    return list(P.rays)


def _shear_candidates(P1: RationalPolygon, P2: RationalPolygon):
    """Integers k for which T^k P1 = P2 is possible, tried in a fixed order."""
    for v in sorted(P1.vertices):
        if v[0] == 0:
            continue
        ks = []
        for w in P2.vertices:
            if w[0] == v[0]:
                k = (w[1] - v[1]) / v[0]
                if k.denominator == 1:
                    ks.append(int(k))
        return ks
    d1, d2 = _direction_list(P1), _direction_list(P2)
    for r1, r2 in zip(d1, d2):
        if r1[0] != 0 and r1[0] == r2[0]:
            k = Fraction(r2[1] - r1[1], r1[0])
            return [int(k)] if k.denominator == 1 else []
    return [0]


def _same_up_to_shear(P1: RationalPolygon, P2: RationalPolygon, k: int) -> bool:
    return map_polygon(P1, linear_map(shear(k))) == P2


def orbits_equal(W1: WeightedPolygon, W2: WeightedPolygon) -> bool:
    if W1.lines != W2.lines:
        return False
    flips = tuple(a * b for a, b in zip(W1.signs, W2.signs))
    try:
        W1f = act(GroupElement(flips, 0), W1)
    except NonConvexImage:
        return False
    return any(_same_up_to_shear(W1f.polygon, W2.polygon, k) for k in _shear_candidates(W1f.polygon, W2.polygon))


def pondered_orbits_equal(PW1: PonderedWeightedPolygon, PW2: PonderedWeightedPolygon) -> bool:
    W1, W2 = PW1.base, PW2.base
    if W1.lines != W2.lines:
        return False
    if W1.complexity == 0:
        return orbits_equal(W1, W2)
    k = PW2.indices[0] - PW1.indices[0]
    if any(b - a != k for a, b in zip(PW1.indices, PW2.indices)):
        return False
    flips = tuple(a * b for a, b in zip(W1.signs, W2.signs))
    try:
        W1f = act(GroupElement(flips, 0), W1)
    except NonConvexImage:
        return False
    return _same_up_to_shear(W1f.polygon, W2.polygon, k)


def _normalizing_shear(P: RationalPolygon) -> int:
    """Shear k making the first non-vertical boundary direction (a, b), a > 0, satisfy 0 <= b < a.

    Boundary walk starts at the lexicographically smallest vertex, which T^k cannot move in order.
    """
    if P.lines:
        dirs = [d for _, d in P.lines]
    else:
        edges = P.edges()
        start = min(P.vertices)
        i = next(i for i, e in enumerate(edges) if e.start == start)
        dirs = [e.direction for e in edges[i:] + edges[:i]]
    for a, b in dirs:
        if a != 0:
            if a < 0:
                a, b = -a, -b
            return -(b // a)
    raise NotCanonicalizable("every boundary direction is vertical; the polygon is shear-invariant")


def canonical_form(PW: PonderedWeightedPolygon) -> PonderedWeightedPolygon:
    """Orbit representative: all signs +1, then ``k_1 = 0`` (or an edge-slope rule when s = 0)."""
    if not is_admissible(PW.base):
        raise NotAdmissible("canonical form needs an admissible weighted polygon")
    s = PW.complexity
    PW = act_pondered(GroupElement(PW.base.signs, 0), PW)
    k = -PW.indices[0] if s else _normalizing_shear(PW.base.polygon)
    return act_pondered(GroupElement((1,) * s, k), PW)


# -- heights --------------------------------------------------------------


def slice_length(W: WeightedPolygon, j: int) -> Fraction:
    """Length of the slice at line ``j`` (0-based)."""
    s = vertical_slice(W.polygon, W.lines[j])
    if s is None or not s.is_bounded:
        raise UnboundedSlice(f"slice at x = {W.lines[j]} is not compact")
    return s.length


def validate_height(W: WeightedPolygon, j: int, h) -> bool:
    return 0 < Q(h) < slice_length(W, j)
