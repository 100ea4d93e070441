"""Exact integral-affine algebra in the plane.

Scalars are :class:`fractions.Fraction`; points and vectors are plain
2-tuples.  Matrices and affine maps are small immutable dataclasses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Tuple, Union

from .errors import DegenerateVector

Number = Union[int, Fraction]
Point = Tuple[Fraction, Fraction]


def Q(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused so that no binary rounding slips into exact data.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot make an exact rational from {x!r}")


def point(x, y) -> Point:
    return (Q(x), Q(y))


def primitive(v) -> Tuple[int, int]:
    """Smallest integer vector pointing in the direction of ``v``.

    Rational vectors are first cleared of denominators.
    """
    x, y = Q(v[0]), Q(v[1])
    if x == 0 and y == 0:
        raise DegenerateVector("zero vector has no primitive direction")
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    xi, yi = int(x * den), int(y * den)
    g = gcd(abs(xi), abs(yi))
    return (xi // g, yi // g)


def det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot2(u, v):
    return u[0] * v[0] + u[1] * v[1]


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def scale(c, v):
    return (c * v[0], c * v[1])


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        x, y = other
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def inverse(self) -> "Mat2":
        det = self.det()
        if det not in (1, -1):
            raise ValueError(f"matrix {self} is not in GL(2,Z)")
        return Mat2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def columns(self):
        return (self.a, self.c), (self.b, self.d)

    @classmethod
    def from_columns(cls, u, v) -> "Mat2":
        return cls(int(u[0]), int(v[0]), int(u[1]), int(v[1]))

    def as_list(self):
        return [[self.a, self.b], [self.c, self.d]]


IDENTITY = Mat2(1, 0, 0, 1)


def shear(k: int) -> Mat2:
    """The vertical shear ``T^k = [[1, 0], [k, 1]]``."""
    return Mat2(1, 0, k, 1)


def horizontal_shear(k: int) -> Mat2:
    """``T_k = [[1, k], [0, 1]]``, the form taken by edge-to-edge transitions."""
    return Mat2(1, k, 0, 1)


T = shear(1)


@dataclass(frozen=True)
class AffineMap:
    """``p -> linear @ p + translation`` with ``linear`` in GL(2,Z)."""

    linear: Mat2 = IDENTITY
    translation: Point = (Fraction(0), Fraction(0))

    def __post_init__(self):
        if self.linear.det() not in (1, -1):
            raise ValueError(f"linear part {self.linear} is not in GL(2,Z)")
        object.__setattr__(self, "translation", (Q(self.translation[0]), Q(self.translation[1])))

    def __call__(self, p) -> Point:
        return apply_affine(self, p)

    def is_identity(self) -> bool:
        return self.linear == IDENTITY and self.translation == (0, 0)


def translation(v) -> AffineMap:
    return AffineMap(IDENTITY, (Q(v[0]), Q(v[1])))


def linear_map(m: Mat2) -> AffineMap:
    return AffineMap(m, (Fraction(0), Fraction(0)))


def _nd(v):
    if isinstance(v, int):
        return v, 1
    return v.numerator, v.denominator


def _combo(a, b, nx, dx, ny, dy, nt, dt) -> Fraction:
    # a*x + b*y + t over one common denominator, normalized once
    den = dx * dy * dt
    return Fraction(a * nx * dy * dt + b * ny * dx * dt + nt * dx * dy, den)


def apply_affine(A: AffineMap, p) -> Point:
    L, t = A.linear, A.translation
    nx, dx = _nd(p[0])
    ny, dy = _nd(p[1])
    n0, d0 = _nd(t[0])
    n1, d1 = _nd(t[1])
    return (_combo(L.a, L.b, nx, dx, ny, dy, n0, d0), _combo(L.c, L.d, nx, dx, ny, dy, n1, d1))


def compose_affine(A: AffineMap, B: AffineMap) -> AffineMap:
    """``A o B`` (apply ``B`` first)."""
    return AffineMap(A.linear @ B.linear, apply_affine(A, B.translation))


def invert_affine(A: AffineMap) -> AffineMap:
    inv = A.linear.inverse()
    tx, ty = inv @ A.translation
    return AffineMap(inv, (-tx, -ty))


def apply_tln(lam, n: int, p) -> Point:
    """Piecewise shear: identity left of ``x = lam``, ``T^n`` about the line on the right.

    The origin chosen on the line does not matter since ``T^n`` fixes vertical vectors.
    """
    x, y = p
    if x < lam:
        return (x, y)
    return (x, y + n * (x - lam))


@dataclass(frozen=True)
class PiecewiseShear:
    """Composition of commuting shears ``t_{lam}^{n}`` over a list of cuts."""

    cuts: Tuple[Tuple[Fraction, int], ...] = ()

    def __post_init__(self):
        cuts = tuple((Q(lam), int(n)) for lam, n in self.cuts)
        for (l0, _), (l1, _) in zip(cuts, cuts[1:]):
            if not l0 < l1:
                raise ValueError("cut abscissae must be strictly increasing")
        object.__setattr__(self, "cuts", cuts)

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "PiecewiseShear":
        merged = {}
        for lam, n in pairs:
            lam = Q(lam)
            merged[lam] = merged.get(lam, 0) + int(n)
        return cls(tuple((lam, n) for lam, n in sorted(merged.items()) if n != 0))

    def __call__(self, p) -> Point:
        return apply_tvec(self, p)

    def inverse(self) -> "PiecewiseShear":
        return PiecewiseShear(tuple((lam, -n) for lam, n in self.cuts))

    def slope_at(self, x) -> int:
        """Total shear exponent in force at abscissa ``x``."""
        return sum(n for lam, n in self.cuts if x >= lam)

    def is_identity(self) -> bool:
        return not self.cuts


def apply_tvec(ps: PiecewiseShear, p) -> Point:
    x, y = p
    for lam, n in ps.cuts:
        if x >= lam:
            y = y + n * (x - lam)
    return (x, y)
