import copy
import json
from dataclasses import replace
from fractions import Fraction as F

import pytest

from semitoric.atlas import (
    ALLOWED_TAGS,
    Chart,
    build_atlas,
    build_cover,
    choose_rho,
    compactness_report,
    recheck,
    transitions,
    unfold_cuts,
    verify_cocycle,
    windowless_atlas_finite,
)
from semitoric.errors import WindowRequired
from semitoric.exact_affine import compose_affine, invert_affine, translation
from semitoric.fixtures import L0, L_half_strip, L_hidden, L_strip, L_triangle, L_unbounded_fake, triangle


@pytest.fixture(scope="module")
def atlas_L0():
    return build_atlas(L0())


@pytest.fixture(scope="module")
def atlas_triangle():
    return build_atlas(L_triangle())


def test_L0_certificate(atlas_L0):
    A = atlas_L0
    assert A.ok
    assert A.coverage_ok and A.uncovered is None
    assert A.special_disjoint and A.special_unique
    assert A.cuts_covered
    models = A.census["models"]
    assert models["EllipticElliptic"] == 3
    assert models["FocusFocus"] == 1
    assert models["CutChart"] >= 1


def test_L0_focus_focus_chart_sits_on_the_node(atlas_L0):
    (ff,) = [c for c in atlas_L0.charts if c.model == "FocusFocus"]
    assert ff.center == (1, F(1, 2))


def test_every_tag_is_allowed(atlas_L0):
    assert {t.case_tag for t in atlas_L0.transitions} <= set(ALLOWED_TAGS)
    for t in atlas_L0.transitions:
        if t.case_tag in ("EE", "EEE"):
            # the translation runs along the shared edge direction
            along = 0 if t.orientation == "horizontal" else 1
            assert t.shear_k is not None and t.translation[1 - along] == 0


def test_triangle_census(atlas_triangle):
    m = atlas_triangle.census["models"]
    assert m["EllipticElliptic"] == 3
    assert m["Elliptic"] >= 3 and m["Regular"] >= 1
    assert m["FocusFocus"] == 0 and m["CutChart"] == 0
    assert atlas_triangle.ok


def test_edge_charts_differ_by_a_horizontal_translation():
    a = Chart(0, (F(1, 4), 0), F(1, 4), translation((F(1, 4), 0)), "Elliptic")
    b = Chart(1, (F(1, 2), 0), F(1, 4), translation((F(1, 2), 0)), "Elliptic")
    ts = transitions([a, b], triangle())
    assert {t.case_tag for t in ts} == {"EE"}
    assert {t.shear_k for t in ts} == {0}
    assert {t.translation for t in ts} == {(F(1, 4), 0), (F(-1, 4), 0)}
    assert verify_cocycle(ts).ok


def test_regular_overlap_delta():
    a = Chart(0, (0, 0), F(1, 2), translation((0, 0)), "Regular")
    b = Chart(1, (F(1, 2), F(1, 4)), F(1, 2), translation((F(1, 2), F(1, 4))), "Regular")
    (ab, ba) = transitions([a, b])
    assert ab.case_tag == "RR"
    assert ab.frame_delta == translation((F(-1, 2), F(-1, 4)))
    assert ba.frame_delta == translation((F(1, 2), F(1, 4)))


def test_choose_rho():
    assert choose_rho(L0()) == F(1, 8)
    assert choose_rho(L_triangle()) == F(1, 4)
    low = replace(L0(), heights=(F(1, 100),))
    assert choose_rho(low) == F(1, 400)


def test_corrupted_delta_breaks_the_cocycle(atlas_L0):
    trans = list(atlas_L0.transitions)
    bump = translation((F(1, 64), 0))
    for n, t in enumerate(trans):
        m = next(i for i, u in enumerate(trans) if (u.source, u.target) == (t.target, t.source))
        bad = list(trans)
        d = compose_affine(bump, t.frame_delta)
        bad[n] = replace(t, frame_delta=d)
        bad[m] = replace(trans[m], frame_delta=invert_affine(d))
        res = verify_cocycle(bad, atlas_L0.scene.P)
        if not res.ok:
            assert len(res.witness) == 3
            assert {t.source, t.target} <= set(res.witness)
            return
    pytest.fail("no corruption was detected")


def test_one_sided_corruption_is_caught_as_a_pair(atlas_L0):
    trans = list(atlas_L0.transitions)
    trans[0] = replace(trans[0], frame_delta=compose_affine(translation((1, 0)), trans[0].frame_delta))
    res = verify_cocycle(trans)
    assert not res.ok and len(res.witness) == 2


def test_cut_unfolding_L0(atlas_L0):
    unfolded = {c.center: c.unfolded for c in unfold_cuts(L0(), atlas_L0.charts)}
    assert unfolded[(1, 1)] == "Elliptic"
    between = [u for (x, y), u in unfolded.items() if F(1, 2) < y < 1]
    assert between and set(between) == {"Regular"}


def test_cut_unfolding_hidden():
    A = build_atlas(L_hidden())
    assert A.ok
    tops = [c.unfolded for c in unfold_cuts(L_hidden(), A.charts) if c.center == (1, 3)]
    assert tops == ["EllipticElliptic"]


def test_window_required():
    with pytest.raises(WindowRequired):
        build_cover(L_strip())
    with pytest.raises(WindowRequired):
        build_atlas(L_half_strip())


def test_windowed_strip():
    A = build_atlas(L_strip(), window=(-2, 2, -1, 2))
    assert A.ok and A.partial_charts > 0
    rep = compactness_report(L_strip(), A)
    assert not rep.polygon_compact and rep.agrees


@pytest.mark.parametrize(
    "make, compact",
    [(L0, True), (L_triangle, True), (L_strip, False), (L_half_strip, False), (L_unbounded_fake, False)],
)
def test_windowless_atlas_finiteness(make, compact):
    assert windowless_atlas_finite(make()) == compact


def test_compactness_report_L0(atlas_L0):
    rep = compactness_report(L0(), atlas_L0)
    assert rep.polygon_compact and rep.windowless_atlas_finite and rep.atlas_consistent
    assert rep.as_dict()["agrees"]


def test_certificate_round_trip(atlas_triangle):
    cert = json.loads(json.dumps(atlas_triangle.certificate()))
    assert cert["format"] == "semitoric-atlas-certificate"
    rep = recheck(cert)
    assert rep.ok, rep.problems


def test_tampered_certificate_fails(atlas_triangle):
    cert = json.loads(json.dumps(atlas_triangle.certificate()))
    bad = copy.deepcopy(cert)
    bad["transitions"][0]["frame_delta"]["translation"] = ["7", "0"]
    rep = recheck(bad)
    assert not rep.ok and rep.problems
    bad = copy.deepcopy(cert)
    del bad["charts"][-1]
    assert not recheck(bad).ok


def test_summary_keys_are_stable(atlas_L0):
    s = atlas_L0.summary()
    assert list(s)[:3] == ["rho", "charts", "transitions"]
    assert s["max_overlap_depth"] >= 1
    json.dumps(s)
