import math

import numpy as np
import pytest

from semitoric.errors import IllConditioned, NotClosed, OriginSingularity
from semitoric.taylor import (
    TWO_PI,
    TauField,
    TaylorSeries2,
    extract_series,
    extract_series_detailed,
    max_coefficient_error,
    normalize_sigma2,
    random_series,
    roundtrip,
    sigma_from_tau,
    synth_tau,
)

S_LIN = TaylorSeries2(1, {(1, 0): 2.0, (0, 1): 1.0})


def test_synth_tau_closed_forms():
    t1, t2 = synth_tau(S_LIN, (0.5, 0.0))
    assert t1 == pytest.approx(2 + math.log(2), abs=1e-14)
    assert t2 == pytest.approx(1.0, abs=1e-14)
    _, t2 = synth_tau(S_LIN, (0.0, 0.5))
    assert t2 == pytest.approx(1 + math.pi / 2, abs=1e-14)


def test_tau_diverges_logarithmically():
    small = [synth_tau(S_LIN, (r, 0.0))[0] for r in (1e-3, 1e-6)]
    assert small[1] - small[0] == pytest.approx(math.log(1e3), rel=1e-12)


def test_origin_is_rejected():
    with pytest.raises(OriginSingularity):
        synth_tau(S_LIN, (0.0, 0.0))


def test_sigma_inverts_tau():
    S = TaylorSeries2(2, {(1, 0): 1.5, (0, 1): 0.25, (2, 0): -1.0, (1, 1): 3.0, (0, 2): 0.5})
    for z in [(0.05, 0.02), (-0.03, 0.07), (0.01, -0.09)]:
        s1, s2 = sigma_from_tau(z, synth_tau(S, z))
        g1, g2 = S.gradient(*z)
        assert abs(s1 - g1) < 1e-13 and abs(s2 - g2) < 1e-13


def test_roundtrip_quadratic():
    S = TaylorSeries2(2, {(1, 0): 2.0, (0, 1): 1.0, (1, 1): 1.0})
    R, err, ex = roundtrip(S, 0.1, 2)
    assert err < 1e-8
    assert ex.closedness_residual < 1e-6


def test_zero_series():
    R = extract_series(TauField.synthesize(TaylorSeries2(2, {}), 0.1), 2)
    assert max((abs(c) for c in R.coeffs.values()), default=0.0) < 1e-8
    assert 0 <= R.sigma2 < TWO_PI


def test_sigma2_close_to_two_pi_is_not_wrapped():
    rng = np.random.default_rng(3)
    S = random_series(rng, 4)
    coeffs = dict(S.coeffs)
    coeffs[(0, 1)] = 6.0
    R, err, _ = roundtrip(TaylorSeries2(4, coeffs))
    assert R.sigma2 == pytest.approx(6.0, abs=1e-8)
    assert err < 1e-8


def test_tau2_lift_is_irrelevant():
    S = TaylorSeries2(2, {(1, 0): 0.5, (0, 1): 2.0, (0, 2): 1.0})
    T = TauField.synthesize(S, 0.1)
    shifted = TauField(T.grid, [(a, b + 4 * math.pi) for a, b in T.values])
    assert max_coefficient_error(S, extract_series(shifted, 2)) < 1e-8


def test_non_closed_field():
    grid = [(0.05 * math.cos(t), 0.05 * math.sin(t)) for t in np.linspace(0.1, 6.0, 60)]
    grid += [(0.02 * x, 0.02 * y) for x, y in grid]
    values = [synth_tau(S_LIN, z) for z in grid]
    # add a rotational component: sigma = (-y, x) is not closed
    values = [(a - y, b + x) for (a, b), (x, y) in zip(values, grid)]
    with pytest.raises(NotClosed):
        extract_series_detailed(TauField(grid, values), 2)


def test_too_few_samples():
    T = TauField.synthesize(S_LIN, 0.1, n_radii=1, n_angles=4)
    with pytest.raises(IllConditioned):
        extract_series(T, 4)


def test_table_round_trip():
    T = TauField.synthesize(S_LIN, 0.1, n_radii=2, n_angles=5)
    assert TauField.from_table(T.to_table()) == T


@pytest.mark.parametrize(
    "s, expected",
    [(1.0, 1.0), (TWO_PI + 1.0, 1.0), (-1.0, TWO_PI - 1.0), (TWO_PI - 1e-12, 0.0), (-1e-12, 0.0)],
)
def test_normalize_sigma2(s, expected):
    assert normalize_sigma2(s) == pytest.approx(expected, abs=1e-12)


def test_random_roundtrips():
    rng = np.random.default_rng(11)
    for _ in range(10):
        S = random_series(rng, int(rng.integers(1, 5)))
        _, err, _ = roundtrip(S)
        assert err < 1e-8
