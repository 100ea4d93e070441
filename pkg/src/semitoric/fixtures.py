"""Named fixtures and a random generator of valid ingredient lists."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional

from .exact_affine import Q
from .ingredients import IngredientList, validate
from .polygon import RationalPolygon, from_points, strip_from_lines, vertical_slice
from .taylor import TaylorSeries2
from .weighted import (
    GroupElement,
    PonderedWeightedPolygon,
    WeightedPolygon,
    act_pondered,
)

F = Fraction


def fix_fake() -> RationalPolygon:
    return from_points([(0, 0), (2, 0), (1, 1), (0, 1)])


def hidden_polygon() -> RationalPolygon:
    """Top vertex (1, 3) with slopes 0 and -2 on either side: a hidden Delzant corner on x = 1."""
    return from_points([(0, 0), (2, 0), (2, 1), (1, 3), (0, 3)])


def triangle() -> RationalPolygon:
    return from_points([(0, 0), (1, 0), (0, 1)])


def unit_square_centered() -> RationalPolygon:
    h = F(1, 2)
    return from_points([(-h, -h), (h, -h), (h, h), (-h, h)])


def half_strip() -> RationalPolygon:
    """``[0, inf) x [0, 1]``."""
    return from_points([(0, 0), (0, 1)], rays=[(1, 0)])


def horizontal_strip() -> RationalPolygon:
    return strip_from_lines([((0, 1), (-1, 0)), ((0, 0), (1, 0))])


def unbounded_fake() -> RationalPolygon:
    """Half-plane piece ``x >= 0``, ``0 <= y <= min(x + 1, 2)``; fake corner at (1, 2)."""
    return from_points([(0, 0), (0, 1), (1, 2)], rays=[(1, 0)])


def linear_series(s1=2, s2=1, order: int = 1) -> TaylorSeries2:
    return TaylorSeries2(order, {(1, 0): Q(s1), (0, 1): Q(s2)})


def L0() -> IngredientList:
    W = WeightedPolygon(fix_fake(), (1,), (1,))
    return IngredientList(1, (linear_series(),), PonderedWeightedPolygon(W, (0,)), (F(1, 2),))


def L_hidden() -> IngredientList:
    W = WeightedPolygon(hidden_polygon(), (1,), (1,))
    return IngredientList(1, (linear_series(1, 3),), PonderedWeightedPolygon(W, (0,)), (F(3, 2),))


def L_triangle() -> IngredientList:
    return IngredientList(0, (), PonderedWeightedPolygon(WeightedPolygon(triangle()), ()), ())


def L_half_strip() -> IngredientList:
    return IngredientList(0, (), PonderedWeightedPolygon(WeightedPolygon(half_strip()), ()), ())


def L_strip() -> IngredientList:
    return IngredientList(0, (), PonderedWeightedPolygon(WeightedPolygon(horizontal_strip()), ()), ())


def L_unbounded_fake() -> IngredientList:
    W = WeightedPolygon(unbounded_fake(), (1,), (1,))
    return IngredientList(1, (linear_series(0, 5),), PonderedWeightedPolygon(W, (0,)), (F(1),))


def corpus() -> dict:
    """Every named ingredient list, keyed by a short name."""
    return {
        "L0": L0(),
        "hidden": L_hidden(),
        "triangle": L_triangle(),
        "half_strip": L_half_strip(),
        "strip": L_strip(),
        "unbounded_fake": L_unbounded_fake(),
        "L0_acted": L0().with_polygon(act_pondered(GroupElement((-1,), 2), L0().polygon)),
    }


# -- random generation ------------------------------------------------------


def _random_profile(rng: random.Random, m_f: int):
    """Top and bottom profiles over [0, W] with integer breakpoints.

    Top slopes drop by 1 (Delzant, or fake with a line) or 2 (hidden, line
    required) at breakpoints; the bottom bends up by 1 where there is no line.
    """
    width = max(2, m_f + 1 + rng.randint(0, 1))
    inner = list(range(1, width))
    line_xs = sorted(rng.sample(inner, m_f))
    top_slopes = [rng.randint(0, 1)]
    for x in inner:
        if x in line_xs:
            drop = rng.choice((1, 1, 2))
        else:
            drop = rng.choice((0, 0, 1))
        top_slopes.append(top_slopes[-1] - drop)
    bottom_slopes = [rng.randint(-1, 0)]
    for x in inner:
        bend = 0 if x in line_xs else rng.choice((0, 0, 1))
        bottom_slopes.append(bottom_slopes[-1] + bend)

    def walk(y0, slopes):
        ys = [y0]
        for s in slopes:
            ys.append(ys[-1] + s)
        return ys

    bot = walk(0, bottom_slopes)
    top0 = walk(0, top_slopes)
    lift = max(b - t for b, t in zip(bot, top0)) + rng.randint(1, 2)
    top = [t + lift for t in top0]
    return width, line_xs, top, bot


def random_weighted(rng: random.Random, m_f: int) -> WeightedPolygon:
    width, line_xs, top, bot = _random_profile(rng, m_f)
    pts = [(x, top[x]) for x in range(width + 1)] + [(x, bot[x]) for x in range(width + 1)]
    return WeightedPolygon(from_points(pts), tuple(line_xs), (1,) * m_f)


def random_series(rng: random.Random, order: Optional[int] = None) -> TaylorSeries2:
    order = order or rng.randint(1, 3)
    coeffs = {}
    for d in range(1, order + 1):
        for j in range(d + 1):
            coeffs[(d - j, j)] = F(rng.randint(-9, 9), rng.randint(1, 4))
    coeffs[(0, 1)] = F(rng.randint(0, 24), 4)
    return TaylorSeries2(order, coeffs)


def random_group_element(rng: random.Random, s: int, kmax: int = 3) -> GroupElement:
    return GroupElement(tuple(rng.choice((1, -1)) for _ in range(s)), rng.randint(-kmax, kmax))


def random_ingredients(rng: random.Random, m_f: Optional[int] = None, scramble: bool = True) -> IngredientList:
    """A valid list; with ``scramble`` its polygon is a random orbit member."""
    m_f = rng.randint(0, 3) if m_f is None else m_f
    W = random_weighted(rng, m_f)
    heights = []
    for lam in W.lines:
        length = vertical_slice(W.polygon, lam).length
        heights.append(length * F(rng.choice((1, 1, 2)), 3) if length > 1 else length / 2)
    PW = PonderedWeightedPolygon(W, tuple(rng.randint(-2, 2) for _ in range(m_f)))
    if scramble:
        PW = act_pondered(random_group_element(rng, m_f, 2), PW)
    L = IngredientList(m_f, tuple(random_series(rng) for _ in range(m_f)), PW, tuple(heights))
    rep = validate(L)
    if not rep:
        raise AssertionError(f"generator produced an invalid list:\n{rep}")
    return L


def random_corpus(seed: int, n: int, max_m_f: int = 3) -> List[IngredientList]:
    rng = random.Random(seed)
    return [random_ingredients(rng, rng.randint(0, max_m_f)) for _ in range(n)]
