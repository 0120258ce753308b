"""Exact homogeneous coordinates and 3x3 integer projective transforms.

Pairs ``(k, l)`` are mapped to integer points ``(k:l:m)``; the operators
A and BA become integer matrices acting on those points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


class InvalidPointError(ValueError):
    pass


class InvalidMatrixError(ValueError):
    pass


class DegenerateImageError(ValueError):
    pass


class PointAtInfinityError(ValueError):
    pass


def _normalize_sign(coords):
    # z > 0 when z != 0, otherwise first nonzero coordinate positive
    if coords[2] != 0:
        return coords if coords[2] > 0 else tuple(-c for c in coords)
    for c in coords:
        if c:
            return coords if c > 0 else tuple(-c for c in coords)
    return coords


@dataclass(frozen=True)
class ProjPoint:
    x: int
    y: int
    z: int

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __str__(self):
        return f"({self.x}:{self.y}:{self.z})"


@dataclass(frozen=True)
class ProjMatrix:
    rows: tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]

    @classmethod
    def of(cls, rows) -> "ProjMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    def entries(self):
        return [v for row in self.rows for v in row]

    def det(self) -> int:
        (a, b, c), (d, e, f), (g, h, i) = self.rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    def scaled(self, s: int) -> "ProjMatrix":
        return ProjMatrix.of([[s * v for v in row] for row in self.rows])

    def __matmul__(self, other: "ProjMatrix") -> "ProjMatrix":
        return mat_mul(self, other)

    def __str__(self):
        return "[" + "; ".join(" ".join(str(v) for v in row) for row in self.rows) + "]"


IDENTITY = ProjMatrix.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
# (k:l:m) -> (k : k+l+m : 2k+2m)
MAT_A = ProjMatrix.of([[1, 0, 0], [1, 1, 1], [2, 0, 2]])
# (k:l:m) -> (l : 2k+m : 2k+2m)
MAT_BA = ProjMatrix.of([[0, 1, 0], [2, 0, 1], [2, 0, 2]])
# (k:l:m) -> (2l-m : 2k+m : 2m), i.e. B(k, l) = (l - 1/2, k + 1/2)
MAT_B = ProjMatrix.of([[0, 2, -1], [2, 0, 1], [0, 0, 2]])


def reduce_point(p: ProjPoint) -> ProjPoint:
    x, y, z = p
    g = gcd(x, y, z)
    if g == 0:
        raise InvalidPointError("all-zero homogeneous coordinates")
    return ProjPoint(*_normalize_sign((x // g, y // g, z // g)))


def reduce_matrix(m: ProjMatrix) -> ProjMatrix:
    g = gcd(*m.entries())
    if g == 0:
        raise InvalidMatrixError("zero matrix")
    if g == 1:
        return m
    return ProjMatrix.of([[v // g for v in row] for row in m.rows])


def mat_mul(m1: ProjMatrix, m2: ProjMatrix) -> ProjMatrix:
    a, b = m1.rows, m2.rows
    rows = [
        [a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] for j in range(3)]
        for i in range(3)
    ]
    return reduce_matrix(ProjMatrix.of(rows))


def mat_pow(m: ProjMatrix, n: int) -> ProjMatrix:
    """``m**n`` by repeated squaring, reduced after each product."""
    if n < 0:
        raise ValueError("negative power")
    result = IDENTITY
    base = m
    while n:
        if n & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        n >>= 1
    return result


def apply_raw(m: ProjMatrix, p) -> tuple[int, int, int]:
    x, y, z = p
    return tuple(r[0] * x + r[1] * y + r[2] * z for r in m.rows)


def mat_apply(m: ProjMatrix, p: ProjPoint) -> ProjPoint:
    image = apply_raw(m, p)
    if not any(image):
        raise DegenerateImageError(f"{m} maps {p} to the zero vector")
    return reduce_point(ProjPoint(*image))


def mu(pair) -> ProjPoint:
    k, l = (Fraction(c) for c in pair)
    m = lcm(k.denominator, l.denominator)
    return reduce_point(ProjPoint(k.numerator * (m // k.denominator),
                                  l.numerator * (m // l.denominator), m))


def mu_inv(p: ProjPoint) -> tuple[Fraction, Fraction]:
    x, y, z = p
    if z == 0:
        raise PointAtInfinityError(f"{p} has no affine image")
    return Fraction(x, z), Fraction(y, z)
