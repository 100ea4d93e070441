"""Truncated two-variable series and a numerical sigma/tau round trip.

The tau field of a focus-focus value is synthesized from a known series and
the series is then recovered from samples alone:

    tau1 = dS/dz1 - ln|z|,     tau2 = dS/dz2 + arg z,   arg z in [0, 2 pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np
from scipy.integrate import romb

from .errors import IllConditioned, NotClosed, OriginSingularity

TWO_PI = 2 * math.pi
# 2*pi lies strictly between these two rationals.
TWO_PI_LO = Fraction("6.28318530717958647692")
TWO_PI_HI = Fraction("6.28318530717958647693")

ROMBERG_SAMPLES = 257  # 2**8 + 1


def monomials(order: int, with_constant: bool = False) -> List[Tuple[int, int]]:
    start = 0 if with_constant else 1
    return [(d - j, j) for d in range(start, order + 1) for j in range(d + 1)]


@dataclass(frozen=True)
class TaylorSeries2:
    """``sum c[i, j] X^i Y^j`` truncated at total degree ``order``.

    Coefficients are Fractions in exact mode or floats in numeric mode.  A
    constant term may be stored so that invalid records can be represented.
    """

    order: int
    coeffs: Dict[Tuple[int, int], object] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.order) < 1:
            raise ValueError("series order must be at least 1")
        clean = {}
        for (i, j), c in self.coeffs.items():
            i, j = int(i), int(j)
            if i < 0 or j < 0 or i + j > self.order:
                raise ValueError(f"term X^{i} Y^{j} exceeds order {self.order}")
            if c != 0:
                clean[(i, j)] = c
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __hash__(self):
        return hash((self.order, tuple(self.coeffs.items())))

    def coeff(self, i: int, j: int):
        return self.coeffs.get((i, j), 0)

    @property
    def sigma1(self):
        return self.coeff(1, 0)

    @property
    def sigma2(self):
        return self.coeff(0, 1)

    def truncate(self, order: int) -> "TaylorSeries2":
        return TaylorSeries2(order, {k: c for k, c in self.coeffs.items() if sum(k) <= order})

    def problems(self) -> List[str]:
        """Normalization failures: nonzero constant term, sigma2 outside [0, 2 pi)."""
        out = []
        if self.coeff(0, 0) != 0:
            out.append(f"constant term {self.coeff(0, 0)} is not zero")
        s2 = self.sigma2
        if isinstance(s2, (int, Fraction)):
            if s2 < 0:
                out.append(f"sigma2 = {s2} is negative")
            elif s2 >= TWO_PI_HI:
                out.append(f"sigma2 = {s2} is not below 2 pi")
            elif s2 > TWO_PI_LO:
                out.append(f"sigma2 = {s2} is within 1e-20 of 2 pi; undecidable at declared precision")
        elif not 0 <= float(s2) < TWO_PI:
            out.append(f"sigma2 = {s2} is outside [0, 2 pi)")
        return out

    def is_normalized(self) -> bool:
        return not self.problems()

    def __call__(self, x, y):
        return sum(c * x**i * y**j for (i, j), c in self.coeffs.items())

    def gradient(self, x, y):
        d1 = sum(i * c * x ** (i - 1) * y**j for (i, j), c in self.coeffs.items() if i)
        d2 = sum(j * c * x**i * y ** (j - 1) for (i, j), c in self.coeffs.items() if j)
        return d1, d2

    def as_float(self) -> "TaylorSeries2":
        return TaylorSeries2(self.order, {k: float(c) for k, c in self.coeffs.items()})


def _arg(z1: float, z2: float) -> float:
    a = math.atan2(z2, z1)
    return a + TWO_PI if a < 0 else a


def synth_tau(S: TaylorSeries2, z) -> Tuple[float, float]:
    z1, z2 = float(z[0]), float(z[1])
    if z1 == 0 and z2 == 0:
        raise OriginSingularity("tau is singular at the origin")
    d1, d2 = S.as_float().gradient(z1, z2)
    return d1 - math.log(math.hypot(z1, z2)), d2 + _arg(z1, z2)


def sigma_from_tau(z, tau) -> Tuple[float, float]:
    z1, z2 = float(z[0]), float(z[1])
    return tau[0] + math.log(math.hypot(z1, z2)), tau[1] - _arg(z1, z2)


@dataclass
class TauField:
    grid: List[Tuple[float, float]]
    values: List[Tuple[float, float]]

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values differ in length")
        if any(z1 == 0 and z2 == 0 for z1, z2 in self.grid):
            raise OriginSingularity("grid contains the origin")

    @property
    def radius(self) -> float:
        return max(math.hypot(*z) for z in self.grid)

    @classmethod
    def synthesize(cls, S: TaylorSeries2, radius: float = 0.1, n_radii: int = 12, n_angles: int = 24) -> "TauField":
        """Polar grid on the punctured disk of the given radius."""
        if not 0 < radius < 1:
            raise ValueError("radius must lie in (0, 1)")
        grid = []
        for a in range(n_radii):
            r = radius * (a + 1) / n_radii
            for b in range(n_angles):
                t = TWO_PI * (b + 0.5) / n_angles
                grid.append((r * math.cos(t), r * math.sin(t)))
        return cls(grid, [synth_tau(S, z) for z in grid])

    def to_table(self) -> str:
        return "".join(f"{z[0]!r} {z[1]!r} {v[0]!r} {v[1]!r}\n" for z, v in zip(self.grid, self.values))

    @classmethod
    def from_table(cls, text: str) -> "TauField":
        grid, values = [], []
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"line {n}: expected 'z1 z2 tau1 tau2'")
            z1, z2, t1, t2 = map(float, parts)
            grid.append((z1, z2))
            values.append((t1, t2))
        return cls(grid, values)


@dataclass
class Extraction:
    series: TaylorSeries2
    closedness_residual: float
    fit_residual: float


def _design(z: np.ndarray, terms, scale: float) -> np.ndarray:
    x, y = z[:, 0] / scale, z[:, 1] / scale
    return np.stack([x**i * y**j for i, j in terms], axis=1)


def _lstsq(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    if A.shape[0] < 3 * A.shape[1]:
        raise IllConditioned(f"{A.shape[0]} samples for {A.shape[1]} unknowns; need three times as many")
    coef, _, rank, sv = np.linalg.lstsq(A, b, rcond=None)
    if rank < A.shape[1] or sv[-1] < 1e-12 * sv[0]:
        raise IllConditioned("least-squares system is rank deficient")
    return coef


def extract_series_detailed(T: TauField, N: int, tol_closed: float = 1e-6) -> Extraction:
    z = np.array(T.grid, dtype=float)
    sig = np.array([sigma_from_tau(p, v) for p, v in zip(T.grid, T.values)])
    if len(z) < 3 * len(monomials(N)):
        raise IllConditioned(f"{len(z)} grid points for {len(monomials(N))} coefficients")
    # tau2 may come with any real lift; bring sigma2 samples onto one branch
    s2 = sig[:, 1]
    med = np.median(s2)
    sig[:, 1] = med + np.mod(s2 - med + math.pi, TWO_PI) - math.pi

    scale = T.radius
    dterms = monomials(N - 1, with_constant=True)
    A = _design(z, dterms, scale)
    c1 = _lstsq(A, sig[:, 0])
    c2 = _lstsq(A, sig[:, 1])

    def poly(c, pts, dx=0, dy=0):
        x, y = pts[:, 0] / scale, pts[:, 1] / scale
        out = np.zeros(len(pts))
        for (i, j), a in zip(dterms, c):
            if i < dx or j < dy:
                continue
            f = math.perm(i, dx) * math.perm(j, dy)
            out += a * f * x ** (i - dx) * y ** (j - dy)
        return out / scale ** (dx + dy)

    residual = float(np.max(np.abs(poly(c1, z, dy=1) - poly(c2, z, dx=1)))) if N > 1 else 0.0
    if residual > tol_closed:
        raise NotClosed(f"mixed-partial residual {residual:.3e} exceeds {tol_closed:.1e}")

    # S(z) = integral over t in [0, 1] of sigma(t z) . z
    ts = np.linspace(0.0, 1.0, ROMBERG_SAMPLES)
    S_vals = np.empty(len(z))
    for n, p in enumerate(z):
        path = ts[:, None] * p[None, :]
        integrand = poly(c1, path) * p[0] + poly(c2, path) * p[1]
        S_vals[n] = romb(integrand, dx=ts[1] - ts[0])

    terms = monomials(N)
    B = _design(z, terms, scale)
    cs = _lstsq(B, S_vals)
    fit_residual = float(np.max(np.abs(B @ cs - S_vals)))
    coeffs = {t: float(a) / scale ** sum(t) for t, a in zip(terms, cs)}
    coeffs[(0, 1)] = normalize_sigma2(coeffs.get((0, 1), 0.0))
    return Extraction(TaylorSeries2(N, coeffs), residual, fit_residual)


def normalize_sigma2(s: float, tol: float = 1e-9) -> float:
    """Reduce into [0, 2 pi); values within ``tol`` of a multiple of 2 pi go to 0."""
    r = math.fmod(s, TWO_PI)
    if r < 0:
        r += TWO_PI
    if r >= TWO_PI - tol:
        r -= TWO_PI
    if -tol < r < 0:
        r = 0.0
    return r


def extract_series(T: TauField, N: int, tol_closed: float = 1e-6) -> TaylorSeries2:
    return extract_series_detailed(T, N, tol_closed).series


def random_series(rng, order: int = 4, lo: float = -5.0, hi: float = 5.0) -> TaylorSeries2:
    """Random float series with zero constant term and sigma2 in [0, 2 pi)."""
    coeffs = {t: float(rng.uniform(lo, hi)) for t in monomials(order)}
    coeffs[(0, 1)] = float(rng.uniform(0.0, TWO_PI))
    return TaylorSeries2(order, coeffs)


def max_coefficient_error(S: TaylorSeries2, R: TaylorSeries2) -> float:
    keys = set(S.coeffs) | set(R.coeffs)
    return max((abs(float(S.coeff(*k)) - float(R.coeff(*k))) for k in keys), default=0.0)


def roundtrip(S: TaylorSeries2, radius: float = 0.1, order: int = None) -> Tuple[TaylorSeries2, float, Extraction]:
    T = TauField.synthesize(S, radius)
    ex = extract_series_detailed(T, order or S.order)
    return ex.series, max_coefficient_error(S, ex.series), ex

