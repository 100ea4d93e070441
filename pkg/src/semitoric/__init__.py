"""Exact and numerical tools for semitoric ingredient lists."""

from .atlas import Atlas, Chart, build_atlas, compactness_report, recheck, verify_cocycle
from .errors import ParseError, SemitoricError
from .exact_affine import AffineMap, Mat2, apply_affine, compose_affine, invert_affine
from .ingredients import IngredientList, isomorphic, validate
from .polygon import RationalPolygon, from_points, vertical_slice
from .sti import dumps, loads
from .taylor import TaylorSeries2, extract_series
from .weighted import (
    GroupElement,
    PonderedWeightedPolygon,
    WeightedPolygon,
    act,
    canonical_form,
    is_delzant_semitoric,
)

__all__ = [
    "AffineMap",
    "Atlas",
    "Chart",
    "GroupElement",
    "IngredientList",
    "Mat2",
    "ParseError",
    "PonderedWeightedPolygon",
    "RationalPolygon",
    "SemitoricError",
    "TaylorSeries2",
    "WeightedPolygon",
    "act",
    "apply_affine",
    "build_atlas",
    "canonical_form",
    "compactness_report",
    "compose_affine",
    "dumps",
    "extract_series",
    "from_points",
    "invert_affine",
    "is_delzant_semitoric",
    "isomorphic",
    "loads",
    "recheck",
    "validate",
    "verify_cocycle",
    "vertical_slice",
]
