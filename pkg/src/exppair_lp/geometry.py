"""Generations of exponent pairs, the order on them, and polygonal covers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .pairs import (
    HALF,
    LETTER_MATRIX,
    ExponentPair,
    Word,
    apply_matrix,
    catalog,
    initial_pair,
    word_to_matrix,
)
from .projective import IDENTITY, MAT_A, ProjMatrix, apply_raw, mat_mul, mat_pow, mu

Point = tuple[Fraction, Fraction]

DEFAULT_GENERATION_CAP = 20


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[Point]:
    """Monotone chain; returns CCW vertices without collinear points."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 1 or (len(hull) == 2 and hull[0] == hull[1]):
        return hull[:1]
    return hull


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon with exact vertices; segments and points are allowed."""

    vertices: tuple[Point, ...]

    @classmethod
    def from_points(cls, points) -> "ConvexPolygon":
        return cls(tuple(convex_hull((Fraction(x), Fraction(y)) for x, y in points)))

    @property
    def empty(self) -> bool:
        return not self.vertices

    def area2(self) -> Fraction:
        v = self.vertices
        return sum((v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1]
                    for i in range(len(v))), Fraction(0))

    def contains(self, p) -> bool:
        v = self.vertices
        p = (Fraction(p[0]), Fraction(p[1]))
        if not v:
            return False
        if len(v) == 1:
            return v[0] == p
        if len(v) == 2:
            a, b = v
            if _cross(a, b, p) != 0:
                return False
            return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
                    and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))
        return all(_cross(v[i], v[(i + 1) % len(v)], p) >= 0 for i in range(len(v)))

    def bounding_box(self) -> "ConvexPolygon":
        xs = [x for x, _ in self.vertices]
        ys = [y for _, y in self.vertices]
        return rectangle(min(xs), max(xs), min(ys), max(ys))

    def image(self, m: ProjMatrix) -> "ConvexPolygon":
        """Image under a projective map that is finite on the polygon."""
        return ConvexPolygon.from_points(apply_matrix(m, v) for v in self.vertices)


@dataclass(frozen=True)
class Region:
    parts: tuple[ConvexPolygon, ...]

    @classmethod
    def of(cls, *parts) -> "Region":
        return cls(tuple(p for p in parts if not p.empty))

    def vertices(self):
        for part in self.parts:
            yield from part.vertices

    def contains(self, p) -> bool:
        return any(part.contains(p) for part in self.parts)

    def image(self, m: ProjMatrix) -> "Region":
        return Region(tuple(part.image(m) for part in self.parts))

    def rectangles(self) -> list[ConvexPolygon]:
        return [p for p in self.parts if len(p.vertices) > 2]


def rectangle(x0, x1, y0, y1) -> ConvexPolygon:
    return ConvexPolygon.from_points([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


def point_polygon(p) -> ConvexPolygon:
    return ConvexPolygon.from_points([p])


# --- generations and the order -------------------------------------------

@dataclass(frozen=True)
class Generation:
    depth: int
    entries: tuple[tuple[Word, ExponentPair], ...]


def generation(initial: ExponentPair | str, n: int,
               cap: int = DEFAULT_GENERATION_CAP) -> Generation:
    """All 2**n pairs obtained by words of length n over {A, BA}."""
    if n < 0:
        raise ValueError("negative generation depth")
    if n > cap:
        raise ValueError(f"generation {n} exceeds the cap {cap}")
    label = initial if isinstance(initial, str) else None
    start = initial_pair(initial) if isinstance(initial, str) else initial
    base = mu(start)
    entries = []
    # grow matrices level by level so every prefix product is computed once
    level = [((), IDENTITY)]
    for _ in range(n):
        level = [(w + (c,), mat_mul(m, LETTER_MATRIX[c]))
                 for w, m in level for c in ("A", "BA")]
    for letters, m in level:
        x, y, z = apply_raw(m, base)
        pair = ExponentPair(Fraction(x, z), Fraction(y, z), start.eps)
        word = Word(letters, None, label if label else (start.k, start.l))
        entries.append((word, pair))
    return Generation(n, tuple(entries))


def generation_pairs(start: ExponentPair, n: int) -> list[Point]:
    """Pairs of generation n as plain tuples; cheap path for large n."""
    pts = [(start.k, start.l)]
    for _ in range(n):
        nxt = []
        for k, l in pts:
            d = 2 * (k + 1)
            a = (k / d, (k + l + 1) / d)
            nxt.append(a)
            nxt.append((a[1] - HALF, a[0] + HALF))
        pts = nxt
    return pts


class Order(enum.Enum):
    PRECEDES = "<"
    SUCCEEDS = ">"
    INCOMPARABLE = "~"


def precedes(p, q) -> Order:
    """(k, l) precedes (kappa, lambda) iff k < kappa and l > lambda."""
    (k, l), (kk, ll) = tuple(p), tuple(q)
    if k < kk and l > ll:
        return Order.PRECEDES
    if k > kk and l < ll:
        return Order.SUCCEEDS
    return Order.INCOMPARABLE


def gray_order_words(n: int) -> list[tuple[str, ...]]:
    """Binary reflected Gray code over {A, BA}, first letter most significant."""
    if n < 1:
        raise ValueError("n must be positive")
    codes: list[tuple[str, ...]] = [()]
    for _ in range(n):
        codes = [("A",) + c for c in codes] + [("BA",) + c for c in reversed(codes)]
    return codes


# --- covers ---------------------------------------------------------------

def triangle_T() -> Region:
    return Region.of(ConvexPolygon.from_points([(HALF, HALF), (0, 1), (0, HALF)]))


SIXTH = Fraction(1, 6)
TWO_THIRDS = Fraction(2, 3)


def lemma1_cover() -> Region:
    """Closed rectangles [0,1/6]x[2/3,1] and [1/6,1/2]x[1/2,2/3] plus (1/6,2/3)."""
    return Region.of(
        rectangle(0, SIXTH, TWO_THIRDS, 1),
        rectangle(SIXTH, HALF, HALF, TWO_THIRDS),
        point_polygon((SIXTH, TWO_THIRDS)),
    )


def catalog_cover() -> Region:
    """A cover of the whole pair set: the two closed rectangles and P0.

    Every catalog pair p has A p in the first rectangle, so its generated
    set sits in the rectangles together with p itself.
    """
    base = lemma1_cover()
    points = tuple(point_polygon(p.point) for _, p in catalog())
    return Region(base.parts[:2] + points)


def refine_cover(region: Region, rounds: int,
                 generator: Point = (SIXTH, TWO_THIRDS)) -> Region:
    """Replace every part by the bounding boxes of its A and BA images.

    The generating point is kept as its own part.  Other point parts are
    dropped: the generator sits on a corner of both rectangles, so its
    images are corners of the boxed images.
    """
    gen = point_polygon(generator)
    for _ in range(rounds):
        parts = []
        for part in region.parts:
            if len(part.vertices) <= 1:
                continue
            for letter in ("A", "BA"):
                img = part.image(LETTER_MATRIX[letter])
                parts.append(img.bounding_box())
        region = Region(tuple(parts) + (gen,))
    return region


def hull_polygon(directions, initial=None, tolerance=Fraction(1, 10**9),
                 max_depth: int = 200) -> ConvexPolygon:
    """Outer polygon from support lines ``alpha*k + beta*l >= inf``.

    Each infimum is computed by the branch-and-bound search over the pairs
    generated from ``initial`` (a label, a list of labels, or ``None`` for
    the whole catalog).  The certified lower bound is used so the polygon
    always contains the pair set.  The top side is the segment from (0,1)
    to (1/2,1/2), inherited from the triangle.
    """
    from .lp import LinearConstraint, clip_halfplane, linear_objective
    from .optimizer import SearchConfig, optimize

    poly = triangle_T().parts[0]
    labels = _labels(initial)
    for alpha, beta in directions:
        alpha, beta = Fraction(alpha), Fraction(beta)
        cfg = SearchConfig(tolerance=tolerance, max_depth=max_depth, initial_pairs=labels)
        res = optimize(linear_objective(alpha, beta), [], cfg)
        poly = clip_halfplane(poly, LinearConstraint(alpha, beta, -res.lower_bound))
    return poly


def _labels(initial):
    if initial is None:
        return None
    if isinstance(initial, str):
        return (initial,)
    return tuple(initial)


def tangent_direction(n: int) -> tuple[float, float]:
    """Normalized A BA A^n (1/6,2/3) - (1/6,2/3)."""
    if n < 1:
        raise ValueError("n must be positive")
    m = mat_mul(word_to_matrix(("A", "BA")), mat_pow(MAT_A, n))
    k, l = apply_matrix(m, (SIXTH, TWO_THIRDS))
    dk, dl = k - SIXTH, l - TWO_THIRDS
    # Fractions with huge terms: divide exactly first, then convert
    scale = max(abs(dk), abs(dl))
    dk, dl = float(dk / scale), float(dl / scale)
    norm = math.hypot(dk, dl)
    return dk / norm, dl / norm
