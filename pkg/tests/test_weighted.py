import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semitoric.errors import ComplexityTooLarge, NotCanonicalizable, SignsNotNormalized
from semitoric.exact_affine import linear_map, shear
from semitoric.fixtures import (
    fix_fake,
    hidden_polygon,
    horizontal_strip,
    random_group_element,
    random_weighted,
    triangle,
    unbounded_fake,
    unit_square_centered,
)
from semitoric.polygon import from_points, map_polygon, strip_from_lines
from semitoric.weighted import (
    CornerKind,
    GroupElement,
    PonderedWeightedPolygon,
    WeightedPolygon,
    act,
    act_pondered,
    all_plus,
    canonical_form,
    classify_corner,
    is_admissible,
    is_delzant_semitoric,
    orbits_equal,
    pondered_orbits_equal,
    slice_length,
    validate_height,
)

W_FAKE = WeightedPolygon(fix_fake(), (1,), (1,))
FLIP = GroupElement((-1,), 0)


def test_rejects_bad_lines():
    with pytest.raises(ValueError):
        WeightedPolygon(fix_fake(), (1, 1), (1, 1))
    with pytest.raises(ValueError):
        WeightedPolygon(fix_fake(), (2,), (1,))
    with pytest.raises(ValueError):
        WeightedPolygon(fix_fake(), (1,), (2,))


def test_corner_kinds_on_fix_fake():
    kinds = {z: classify_corner(W_FAKE, z).kind for z in [(0, 0), (2, 0), (1, 1), (0, 1)]}
    assert kinds[(1, 1)] is CornerKind.FAKE
    assert classify_corner(W_FAKE, (1, 1)).det == 0
    assert all(kinds[z] is CornerKind.DELZANT for z in [(0, 0), (2, 0), (0, 1)])


def test_hidden_delzant_corner():
    W = WeightedPolygon(from_points([(0, 0), (2, 0), (1, 2), (0, 2)]), (1,), (1,))
    c = classify_corner(W, (1, 2))
    assert c.kind is CornerKind.HIDDEN_DELZANT and c.det == 1
    assert classify_corner(WeightedPolygon(hidden_polygon(), (1,), (1,)), (1, 3)).kind is CornerKind.HIDDEN_DELZANT


def test_triangle_corner_is_delzant():
    assert classify_corner(WeightedPolygon(triangle()), (0, 0)).kind is CornerKind.DELZANT


def test_line_through_a_bottom_vertex_is_a_violation():
    P = from_points([(0, 0), (1, -1), (2, 0), (2, 2), (0, 2)])
    W = WeightedPolygon(P, (1,), (1,))
    assert classify_corner(W, (1, -1)).kind is CornerKind.VIOLATION


def test_corner_needs_all_plus():
    with pytest.raises(SignsNotNormalized):
        classify_corner(WeightedPolygon(fix_fake(), (1,), (-1,)), (1, 1))


def test_delzant_reports():
    rep = is_delzant_semitoric(W_FAKE)
    assert rep.ok
    assert [c.kind for c in rep.corners].count(CornerKind.DELZANT) == 3
    rep = is_delzant_semitoric(WeightedPolygon(fix_fake(), (F(1, 2),), (1,)))
    assert not rep.ok
    assert any(c.kind is CornerKind.NON_VERTEX_ON_LINE for c in rep.corners)
    assert is_delzant_semitoric(act(FLIP, W_FAKE)).ok


def test_delzant_rejects_vertical_rays():
    P = from_points([(0, 0), (1, 0)], rays=[(0, 1)])
    assert not is_delzant_semitoric(WeightedPolygon(P)).ok


def test_admissibility():
    assert is_admissible(W_FAKE)
    assert not is_admissible(WeightedPolygon(unit_square_centered(), (0,), (1,)))
    assert is_admissible(WeightedPolygon(triangle()))
    assert is_admissible(WeightedPolygon(unbounded_fake(), (1,), (1,)))


def test_admissibility_cap():
    W = WeightedPolygon(from_points([(0, 0), (20, 0), (20, 1), (0, 1)]), tuple(range(1, 19)), (1,) * 18)
    with pytest.raises(ComplexityTooLarge):
        is_admissible(W)


def test_sign_flip_of_fix_fake():
    W = act(FLIP, W_FAKE)
    assert W.signs == (-1,)
    assert W.polygon == from_points([(0, 0), (1, 0), (2, 1), (0, 1)])


def test_identity_and_shear_actions():
    assert act(GroupElement((1,), 0), W_FAKE) == W_FAKE
    W = act(GroupElement((1,), 1), W_FAKE)
    assert W.polygon == from_points([(0, 0), (2, 2), (1, 2), (0, 1)])
    assert W.signs == (1,)


def test_pondered_action_moves_indices_by_the_shear():
    PW = PonderedWeightedPolygon(W_FAKE, (0,))
    assert act_pondered(GroupElement((1,), 3), PW).indices == (3,)
    assert act_pondered(FLIP, PonderedWeightedPolygon(W_FAKE, (5,))).indices == (5,)
    assert act_pondered(GroupElement.identity(1), PW) == PW


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 3))
def test_action_composition(seed, m_f):
    rng = random.Random(seed)
    W = random_weighted(rng, m_f)
    g1, g2 = random_group_element(rng, m_f), random_group_element(rng, m_f)
    assert act(g2, act(g1, W)) == act(g2 * g1, W)
    assert act(g1.inverse(), act(g1, W)) == W


def test_orbit_examples():
    PW = PonderedWeightedPolygon(W_FAKE, (0,))
    assert orbits_equal(W_FAKE, act(FLIP, W_FAKE))
    sheared = PonderedWeightedPolygon(WeightedPolygon(map_polygon(fix_fake(), linear_map(shear(1))), (1,), (1,)), (1,))
    assert pondered_orbits_equal(PW, sheared)
    assert not pondered_orbits_equal(PW, PonderedWeightedPolygon(W_FAKE, (1,)))


def test_canonical_form_of_flipped_image():
    PW = PonderedWeightedPolygon(act(FLIP, W_FAKE), (2,))
    C = canonical_form(PW)
    assert C.base.signs == (1,) and C.indices == (0,)
    assert C.base.polygon == map_polygon(fix_fake(), linear_map(shear(-2)))
    assert canonical_form(C) == C


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 3))
def test_canonical_form_is_an_orbit_invariant(seed, m_f):
    rng = random.Random(seed)
    PW = PonderedWeightedPolygon(random_weighted(rng, m_f), tuple(rng.randint(-3, 3) for _ in range(m_f)))
    A = act_pondered(random_group_element(rng, m_f), PW)
    B = act_pondered(random_group_element(rng, m_f), PW)
    assert canonical_form(A) == canonical_form(B)
    assert pondered_orbits_equal(A, B)
    assert pondered_orbits_equal(A, canonical_form(A))


def test_canonical_form_of_unbounded_polygons():
    PW = PonderedWeightedPolygon(WeightedPolygon(unbounded_fake(), (1,), (1,)), (0,))
    C = canonical_form(act_pondered(GroupElement((-1,), 2), PW))
    assert C == canonical_form(PW)
    with pytest.raises(NotCanonicalizable):
        canonical_form(PonderedWeightedPolygon(WeightedPolygon(strip_from_lines([((0, 0), (0, 1)), ((1, 0), (0, -1))]))))


def test_strip_orbit():
    W = WeightedPolygon(horizontal_strip())
    assert all_plus(W) == W
    PW = PonderedWeightedPolygon(W)
    tilted = act_pondered(GroupElement((), 2), PW)
    assert tilted != PW
    assert canonical_form(tilted) == canonical_form(PW)


def test_slice_length_and_heights():
    assert slice_length(W_FAKE, 0) == 1
    assert validate_height(W_FAKE, 0, F(1, 2))
    assert not validate_height(W_FAKE, 0, 1)
    assert not validate_height(W_FAKE, 0, 0)
