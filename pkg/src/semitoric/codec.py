"""Exact JSON encodings of rationals, points, matrices, affine maps and polygons."""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .exact_affine import AffineMap, Mat2, Q
from .polygon import RationalPolygon, from_points, strip_from_lines

_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def enc_q(x) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dec_q(s, where="") -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ParseError(f"expected a rational string{where}, got {s!r}")
    if isinstance(s, str) and not _RATIONAL.fullmatch(s.strip()):
        raise ParseError(f"malformed rational {s!r}{where}; use \"p/q\"")
    try:
        return Q(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed rational {s!r}{where}") from None


def enc_point(p):
    return [enc_q(p[0]), enc_q(p[1])]


def dec_point(v, where=""):
    if not isinstance(v, list) or len(v) != 2:
        raise ParseError(f"expected a pair{where}, got {v!r}")
    return (dec_q(v[0], where), dec_q(v[1], where))


def dec_int_pair(v, where=""):
    if not isinstance(v, list) or len(v) != 2 or not all(isinstance(a, int) and not isinstance(a, bool) for a in v):
        raise ParseError(f"expected an integer pair{where}, got {v!r}")
    return (v[0], v[1])


def enc_affine(f: AffineMap) -> dict:
    return {"linear": f.linear.as_list(), "translation": enc_point(f.translation)}


def dec_affine(d) -> AffineMap:
    (a, b), (c, e) = d["linear"]
    return AffineMap(Mat2(a, b, c, e), dec_point(d["translation"]))


def enc_polygon(P: RationalPolygon) -> dict:
    if P.lines:
        return {"lines": [{"anchor": enc_point(a), "direction": list(d)} for a, d in P.lines]}
    out = {"vertices": [enc_point(v) for v in P.vertices]}
    if P.rays:
        out["rays"] = [list(r) for r in P.rays]
    return out


def dec_polygon(d, where=" in polygon") -> RationalPolygon:
    if not isinstance(d, dict):
        raise ParseError(f"expected an object{where}")
    if "lines" in d:
        lines = [(dec_point(x.get("anchor"), where), dec_int_pair(x.get("direction"), where)) for x in d["lines"]]
        return strip_from_lines(lines)
    pts = [dec_point(v, where) for v in d.get("vertices", [])]
    rays = [dec_int_pair(r, where) for r in d.get("rays", [])]
    return from_points(pts, rays=rays)
