"""The five-item classifying record of a simple semitoric system."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import ComplexityTooLarge, IncomparableTruncation, InvalidIngredients
from .exact_affine import Point, Q
from .taylor import TaylorSeries2
from .weighted import (
    PonderedWeightedPolygon,
    is_admissible,
    is_delzant_semitoric,
    pondered_orbits_equal,
)
from .polygon import vertical_slice

ITEMS = ("i", "ii", "iii", "iv", "v")
ITEM_NAMES = {
    "i": "number of focus-focus values",
    "ii": "Taylor series",
    "iii": "semitoric polygon",
    "iv": "heights",
    "v": "twisting indices",
}


@dataclass(frozen=True)
class IngredientList:
    m_f: int
    series: Tuple[TaylorSeries2, ...]
    polygon: PonderedWeightedPolygon
    heights: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))
        object.__setattr__(self, "heights", tuple(Q(h) for h in self.heights))

    def with_polygon(self, polygon: PonderedWeightedPolygon) -> "IngredientList":
        return replace(self, polygon=polygon)


@dataclass(frozen=True)
class Node:
    j: int
    c: Point


@dataclass
class ItemResult:
    ok: bool = True
    witness: Optional[str] = None


@dataclass
class ValidationReport:
    items: Dict[str, ItemResult] = field(default_factory=lambda: {k: ItemResult() for k in ITEMS})

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.items.values())

    def __bool__(self):
        return self.ok

    def fail(self, item: str, witness: str):
        r = self.items[item]
        if r.ok:
            r.ok, r.witness = False, witness

    def failed_items(self) -> List[str]:
        return [k for k in ITEMS if not self.items[k].ok]

    def __str__(self):
        out = []
        for k in ITEMS:
            r = self.items[k]
            line = f"item ({k}) {ITEM_NAMES[k]}: {'pass' if r.ok else 'fail'}"
            if r.witness:
                line += f": {r.witness}"
            out.append(line)
        return "\n".join(out)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "items": {k: {"ok": r.ok, "witness": r.witness} for k, r in self.items.items()}}


def validate(L: IngredientList) -> ValidationReport:
    rep = ValidationReport()
    base = L.polygon.base
    m = L.m_f
    if not isinstance(m, int) or m < 0:
        rep.fail("i", f"m_f = {m!r} is not a non-negative integer")
    else:
        for what, n in (
            ("lines", base.complexity),
            ("series", len(L.series)),
            ("heights", len(L.heights)),
            ("indices", len(L.polygon.indices)),
        ):
            if n != m:
                rep.fail("i", f"m_f = {m} but {n} {what}")

    for j, S in enumerate(L.series):
        for p in S.problems():
            rep.fail("ii", f"series {j}: {p}")

    delz = is_delzant_semitoric(base)
    if not delz:
        rep.fail("iii", "; ".join(delz.failures) or "not Delzant semitoric")
    else:
        try:
            if not is_admissible(base):
                rep.fail("iii", "some sign flip breaks convexity")
        except ComplexityTooLarge as e:
            rep.fail("iii", str(e))

    for j, (lam, h) in enumerate(zip(base.lines, L.heights)):
        s = vertical_slice(base.polygon, lam)
        if s is None or not s.is_bounded:
            rep.fail("iv", f"slice at x = {lam} is not compact")
        elif not 0 < h < s.length:
            rep.fail("iv", f"h_{j} = {h} not strictly between 0 and {s.length}")

    if any(not isinstance(k, int) for k in L.polygon.indices):
        rep.fail("v", "twisting indices must be integers")
    return rep


def _require_valid(L: IngredientList):
    rep = validate(L)
    if not rep:
        raise InvalidIngredients("invalid ingredient list:\n" + str(rep))


def nodes(L: IngredientList) -> List[Node]:
    """``c_j = (lam_j, h_j + bottom of the slice)`` on the given representative."""
    _require_valid(L)
    P = L.polygon.base.polygon
    out = []
    for j, (lam, h) in enumerate(zip(L.polygon.base.lines, L.heights)):
        s = vertical_slice(P, lam)
        c = (lam, s.bottom[1] + h)
        if not P.interior_contains(c):
            raise InvalidIngredients(f"node {j} at {c} is not interior")
        out.append(Node(j, c))
    return out


def series_equal(A: TaylorSeries2, B: TaylorSeries2, order: Optional[int] = None) -> bool:
    n = min(A.order, B.order)
    if order is not None:
        if order > n:
            raise IncomparableTruncation(f"order {order} requested, records declare {A.order} and {B.order}")
        n = order
    return A.truncate(n).coeffs == B.truncate(n).coeffs


def isomorphic(L1: IngredientList, L2: IngredientList, order: Optional[int] = None) -> bool:
    """Decide whether two records describe isomorphic systems.

    Items (iii) and (v) are compared as a pondered orbit, the rest literally.
    Series are compared up to the smaller declared order.
    """
    _require_valid(L1)
    _require_valid(L2)
    if L1.m_f != L2.m_f or L1.heights != L2.heights:
        return False
    if not all(series_equal(a, b, order) for a, b in zip(L1.series, L2.series)):
        return False
    return pondered_orbits_equal(L1.polygon, L2.polygon)


def predicted_compactness(L: IngredientList) -> bool:
    return L.polygon.base.polygon.is_compact()
