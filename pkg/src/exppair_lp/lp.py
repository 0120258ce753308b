"""Fractional-linear objectives, linear constraints and polygon predicates.

Extrema of a fractional-linear function with positive denominator over a
convex polygon are attained at vertices, so the bounds below are plain
vertex scans in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import ConvexPolygon, Region, triangle_T

Q = Fraction


class InvalidObjectiveError(ValueError):
    pass


class SingularEvaluationError(ZeroDivisionError):
    pass


def _q(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class FracLinear:
    """(a*k + b*l + c) / (d*k + e*l + f)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction = Fraction(0)
    e: Fraction = Fraction(0)
    f: Fraction = Fraction(1)

    def __post_init__(self):
        for name in "abcdef":
            object.__setattr__(self, name, _q(getattr(self, name)))
        # positive on the triangle, except that a common zero of numerator and
        # denominator at one vertex is tolerated (the value is taken along rays)
        zeros = 0
        for k, l in triangle_T().vertices():
            den = self.den(k, l)
            if den < 0 or (den == 0 and self.num(k, l) != 0):
                raise InvalidObjectiveError(f"denominator of {self} is not positive at ({k}, {l})")
            zeros += den == 0
        if zeros > 1:
            raise InvalidObjectiveError(f"denominator of {self} vanishes on an edge of the triangle")

    def num(self, k, l):
        return self.a * k + self.b * l + self.c

    def den(self, k, l):
        return self.d * k + self.e * l + self.f

    def singular_at(self, k, l) -> bool:
        return self.den(k, l) == 0

    def __str__(self):
        return f"({self.a}k+{self.b}l+{self.c})/({self.d}k+{self.e}l+{self.f})"


@dataclass(frozen=True)
class MaxObjective:
    parts: tuple[FracLinear, ...]

    def __post_init__(self):
        if not self.parts:
            raise InvalidObjectiveError("objective needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))

    @classmethod
    def of(cls, *parts: FracLinear) -> "MaxObjective":
        return cls(tuple(parts))

    def __len__(self):
        return len(self.parts)


def linear_objective(alpha, beta, gamma=0) -> MaxObjective:
    return MaxObjective.of(FracLinear(alpha, beta, gamma))


@dataclass(frozen=True)
class LinearConstraint:
    """alpha*k + beta*l + gamma > 0 (strict) or >= 0."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    strict: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, _q(getattr(self, name)))

    def value(self, k, l) -> Fraction:
        return self.alpha * k + self.beta * l + self.gamma

    def closed(self) -> "LinearConstraint":
        return LinearConstraint(self.alpha, self.beta, self.gamma, False)

    def __str__(self):
        rel = ">" if self.strict else ">="
        return f"{self.alpha}k + {self.beta}l + {self.gamma} {rel} 0"


def eval_frac(fl: FracLinear, p) -> Fraction:
    k, l = tuple(p)
    den = fl.den(k, l)
    if den == 0:
        raise SingularEvaluationError(f"{fl} has zero denominator at ({k}, {l})")
    return fl.num(k, l) / den


def eval_objective(obj: MaxObjective, p) -> Fraction:
    return max(eval_frac(part, p) for part in obj.parts)


def check_constraint(c: LinearConstraint, p) -> bool:
    k, l = tuple(p)
    v = c.value(k, l)
    return v > 0 if c.strict else v >= 0


def check_all(constraints, p) -> bool:
    return all(check_constraint(c, p) for c in constraints)


def _dedupe(vertices):
    out = []
    for v in vertices:
        if not out or out[-1] != v:
            out.append(v)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def clip_vertices(vertices, c: LinearConstraint):
    """Sutherland-Hodgman step against the closed halfplane of ``c``."""
    n = len(vertices)
    if n == 0:
        return []
    vals = [c.value(k, l) for k, l in vertices]
    if all(v >= 0 for v in vals):
        return list(vertices)
    if all(v < 0 for v in vals):
        return []
    if n == 1:
        return []
    out = []
    for i in range(n):
        s, e = vertices[i], vertices[(i + 1) % n]
        vs, ve = vals[i], vals[(i + 1) % n]
        if vs >= 0:
            out.append(s)
        if (vs > 0 and ve < 0) or (vs < 0 and ve > 0):
            t = vs / (vs - ve)
            out.append((s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1])))
    return _dedupe(out)


def clip_halfplane(poly: ConvexPolygon, c: LinearConstraint) -> ConvexPolygon:
    return ConvexPolygon(tuple(clip_vertices(list(poly.vertices), c)))


def clip_all(vertices, constraints):
    for c in constraints:
        vertices = clip_vertices(vertices, c)
        if not vertices:
            break
    return vertices


def feasible_part(vertices, constraints) -> bool:
    clipped = clip_all(list(vertices), constraints)
    if not clipped:
        return False
    for c in constraints:
        if c.strict and max(c.value(k, l) for k, l in clipped) <= 0:
            return False
    return True


def feasible(region: Region, constraints) -> bool:
    """True iff some point of the region satisfies every constraint.

    Strict constraints are first treated as closed; each must then be
    strictly positive at some vertex of the clipped polygon, and the mean of
    those witnesses satisfies all of them at once.
    """
    return any(feasible_part(part.vertices, constraints) for part in region.parts)


def part_range(part: FracLinear, vertices):
    """(min, max) of one fractional-linear part over the given vertices."""
    lo = hi = None
    for k, l in vertices:
        den = part.den(k, l)
        if den == 0:
            if part.num(k, l) == 0:
                # common zero: constant on rays, so the other vertices carry the range
                continue
            raise InvalidObjectiveError(f"{part} is singular at ({k}, {l})")
        if den < 0:
            raise InvalidObjectiveError(f"denominator of {part} is negative at ({k}, {l})")
        v = part.num(k, l) / den
        if lo is None or v < lo:
            lo = v
        if hi is None or v > hi:
            hi = v
    return lo, hi


def theta_bounds_vertices(obj: MaxObjective, vertices):
    lower = upper = None
    for part in obj.parts:
        lo, hi = part_range(part, vertices)
        if lo is None:
            raise InvalidObjectiveError(f"{part} is undefined on every vertex")
        if lower is None or lo > lower:
            lower = lo
        if upper is None or hi > upper:
            upper = hi
    return lower, upper


def theta_bounds(obj: MaxObjective, region: Region) -> tuple[Fraction, Fraction]:
    """Lower/upper bounds: max over parts of their inf, and of their sup."""
    return theta_bounds_vertices(obj, list(region.vertices()))


def strictify(part: FracLinear, r) -> LinearConstraint:
    """Linear form of ``part < r``, valid where the denominator is positive."""
    r = _q(r)
    return LinearConstraint(r * part.d - part.a, r * part.e - part.b, r * part.f - part.c, True)
