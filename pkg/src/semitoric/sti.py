"""Reading and writing ``.sti`` ingredient files.

A ``.sti`` file is a JSON object.  Rationals are strings ``"p/q"`` (or
``"n"``), never decimals.  The canonical writer emits the fields in a fixed
order with two-space indentation, flat lists on one line and a trailing
newline, so a canonical file survives a parse and re-serialize byte for byte.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from typing import List

from .codec import dec_int_pair, dec_polygon, dec_q, enc_polygon, enc_q
from .errors import ParseError, SemitoricError
from .ingredients import IngredientList
from .taylor import TaylorSeries2
from .weighted import PonderedWeightedPolygon, WeightedPolygon

VERSION = 1
FIELDS = ("version", "m_f", "polygon", "lines", "signs", "heights", "indices", "series")
POLYGON_FIELDS = ("vertices", "rays", "lines")
SERIES_FIELDS = ("order", "terms")


class UnknownFieldWarning(UserWarning):
    pass


@dataclass
class ParsedFile:
    ingredients: IngredientList
    warnings: List[str] = field(default_factory=list)


def _position(text: str, offset: int):
    line = text.count("\n", 0, offset) + 1
    return line, offset - (text.rfind("\n", 0, offset) + 1) + 1


def _key_position(text: str, key: str):
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return _position(text, m.start()) if m else (None, None)


def _fail(text: str, key: str, message: str):
    line, col = _key_position(text, key)
    return ParseError(f"{key}: {message}", line, col)


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{what} must be an integer, got {v!r}")
    return v


def _list(v, what):
    if not isinstance(v, list):
        raise ParseError(f"{what} must be a list, got {type(v).__name__}")
    return v


def _check_keys(obj: dict, allowed, where: str, lenient: bool, notes: List[str], text: str):
    for k in obj:
        if k not in allowed:
            msg = f"unknown field {k!r} in {where}"
            if not lenient:
                line, col = _key_position(text, k)
                raise ParseError(msg, line, col)
            notes.append(msg)


def _series(d, n: int, lenient: bool, notes: List[str], text: str) -> TaylorSeries2:
    where = f"series[{n}]"
    if not isinstance(d, dict):
        raise ParseError(f"{where} must be an object")
    _check_keys(d, SERIES_FIELDS, where, lenient, notes, text)
    order = _int(d.get("order"), f"{where}.order")
    coeffs = {}
    for t in _list(d.get("terms", []), f"{where}.terms"):
        if not isinstance(t, list) or len(t) != 3:
            raise ParseError(f"{where}: each term is [i, j, \"p/q\"], got {t!r}")
        i, j = dec_int_pair(t[:2], f" in {where}")
        if (i, j) in coeffs:
            raise ParseError(f"{where}: term ({i}, {j}) repeated")
        coeffs[(i, j)] = dec_q(t[2], f" in {where}")
    try:
        return TaylorSeries2(order, coeffs)
    except ValueError as e:
        raise ParseError(f"{where}: {e}") from None


def parse(text: str, lenient: bool = False) -> ParsedFile:
    """Parse a ``.sti`` document; unknown fields are errors unless ``lenient``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, 1)
    notes: List[str] = []
    _check_keys(doc, FIELDS, "file", lenient, notes, text)
    for k in FIELDS:
        if k not in doc:
            raise ParseError(f"missing field {k!r}", 1, 1)

    current = "version"
    try:
        if doc["version"] != VERSION:
            raise ParseError(f"unsupported version {doc['version']!r}")
        current = "m_f"
        m_f = _int(doc["m_f"], "m_f")
        current = "polygon"
        if not isinstance(doc["polygon"], dict):
            raise ParseError("polygon must be an object")
        _check_keys(doc["polygon"], POLYGON_FIELDS, "polygon", lenient, notes, text)
        P = dec_polygon(doc["polygon"])
        current = "lines"
        lines = [dec_q(x, " in lines") for x in _list(doc["lines"], "lines")]
        current = "signs"
        signs = [_int(e, "sign") for e in _list(doc["signs"], "signs")]
        current = "heights"
        heights = [dec_q(x, " in heights") for x in _list(doc["heights"], "heights")]
        current = "indices"
        indices = [_int(k, "twisting index") for k in _list(doc["indices"], "indices")]
        current = "series"
        series = [_series(d, n, lenient, notes, text) for n, d in enumerate(_list(doc["series"], "series"))]
        current = "lines"
        W = WeightedPolygon(P, tuple(lines), tuple(signs))
        current = "indices"
        PW = PonderedWeightedPolygon(W, tuple(indices))
    except ParseError as e:
        if e.line is not None:
            raise
        raise _fail(text, current, str(e)) from None
    except (SemitoricError, ValueError) as e:
        raise _fail(text, current, str(e)) from None
    for msg in notes:
        warnings.warn(msg, UnknownFieldWarning, stacklevel=2)
    return ParsedFile(IngredientList(m_f, tuple(series), PW, tuple(heights)), notes)


def loads(text: str, lenient: bool = False) -> IngredientList:
    return parse(text, lenient).ingredients


def load(path, lenient: bool = False) -> IngredientList:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), lenient)


def to_document(L: IngredientList) -> dict:
    W = L.polygon.base
    return {
        "version": VERSION,
        "m_f": L.m_f,
        "polygon": enc_polygon(W.polygon),
        "lines": [enc_q(x) for x in W.lines],
        "signs": list(W.signs),
        "heights": [enc_q(h) for h in L.heights],
        "indices": list(L.polygon.indices),
        "series": [
            {"order": S.order, "terms": [[i, j, enc_q(c)] for (i, j), c in S.coeffs.items()]} for S in L.series
        ],
    }


def _render(v, depth: int) -> str:
    # lists that hold no containers stay on one line
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(k)}: {_render(x, depth + 1)}" for k, x in v.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(v, list):
        if not any(isinstance(x, (list, dict)) for x in v):
            return json.dumps(v)
        return "[\n" + ",\n".join(inner + _render(x, depth + 1) for x in v) + "\n" + pad + "]"
    return json.dumps(v)


def dumps(L: IngredientList) -> str:
    return _render(to_document(L), 0) + "\n"


def dump(L: IngredientList, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(L))
