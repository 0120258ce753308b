"""Branch-and-bound search for inf of a max of fractional-linear functions.

The search walks the tree of products of the A and BA matrices.  A node
with accumulated matrix M stands for every pair of the form M p with p in
the pair set, so M applied to a cover of the pair set covers all of its
descendants.  Branches are explored only if their image of the cover still
meets the constraints together with the cut ``theta_i < r``.
"""

from __future__ import annotations

import logging
from math import isqrt
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .geometry import ConvexPolygon, Region, triangle_T
from .lp import (
    InvalidObjectiveError,
    LinearConstraint,
    MaxObjective,
    check_all,
    clip_all,
    clip_halfplane,
    eval_objective,
    feasible_part,
    linear_objective,
    strictify,
    theta_bounds_vertices,
)
from .pairs import ExponentPair, UnknownPairError, Word, catalog
from .projective import IDENTITY, MAT_A, MAT_BA, ProjMatrix, mat_mul, mu

log = logging.getLogger(__name__)

DEFAULT_TOLERANCE = Fraction(1, 10**9)

_BRANCHES = {"A-first": (("A", MAT_A), ("BA", MAT_BA)),
             "BA-first": (("BA", MAT_BA), ("A", MAT_A))}


@dataclass(frozen=True)
class SearchConfig:
    tolerance: Fraction = DEFAULT_TOLERANCE
    max_depth: int = 1000
    root_region: Region | None = None
    branch_order: str = "A-first"
    mode: str = "rigorous"
    initial_pairs: tuple[str, ...] | None = None
    # the theta_i < r cuts; switching them off must not change the value
    objective_cuts: bool = True

    def __post_init__(self):
        object.__setattr__(self, "tolerance", Fraction(self.tolerance))
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.branch_order not in _BRANCHES:
            raise ValueError(f"unknown branch order {self.branch_order!r}")
        if self.mode not in ("rigorous", "greedy"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class SearchStats:
    calls_by_depth: Counter = field(default_factory=Counter)

    @property
    def calls(self) -> int:
        return sum(self.calls_by_depth.values())

    @property
    def max_depth_reached(self) -> int:
        return max(self.calls_by_depth, default=0)

    def format(self) -> str:
        return ",".join(f"{d}:{n}" for d, n in sorted(self.calls_by_depth.items()))


@dataclass
class SearchResult:
    value: Fraction | None
    lower_bound: Fraction | None
    witness_pair: ExponentPair | None
    witness_word: Word | None
    attained: bool
    stats: SearchStats
    mode: str = "rigorous"
    note: str = ""

    @property
    def feasible(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class SearchNode:
    matrix: ProjMatrix
    depth: int
    letters: tuple[str, ...]


class _Search:
    """State shared by one run of the search."""

    def __init__(self, obj: MaxObjective, constraints, config: SearchConfig):
        self.obj = obj
        self.constraints = list(constraints)
        self.closed = [c.closed() for c in self.constraints]
        self.config = config
        root = config.root_region or triangle_T()
        self.root_parts = [[mu(v) for v in part.vertices] for part in root.parts]
        labels = config.initial_pairs
        self.initial = [(name, p, mu(p)) for name, p in catalog()
                        if labels is None or name in labels]
        if labels is not None:
            unknown = set(labels) - {name for name, _, _ in self.initial}
            if unknown:
                raise UnknownPairError(f"unknown initial pairs {sorted(unknown)}")
        self.r: Fraction | None = None
        self.witness: tuple[tuple[str, ...], str, ExponentPair] | None = None
        self.frontier_lower: Fraction | None = None
        self.root_lower: Fraction | None = None
        self.stats = SearchStats()

    def region(self, m: ProjMatrix):
        parts = []
        for verts in self.root_parts:
            pts = []
            for x, y, z in verts:
                rows = m.rows
                xx = rows[0][0] * x + rows[0][1] * y + rows[0][2] * z
                yy = rows[1][0] * x + rows[1][1] * y + rows[1][2] * z
                zz = rows[2][0] * x + rows[2][1] * y + rows[2][2] * z
                pts.append((Fraction(xx, zz), Fraction(yy, zz)))
            parts.append(pts)
        return parts

    def cut_constraints(self):
        if self.r is None or not self.config.objective_cuts:
            return self.constraints
        return self.constraints + [strictify(part, self.r) for part in self.obj.parts]

    def admissible(self, parts) -> bool:
        lc = self.cut_constraints()
        return any(feasible_part(p, lc) for p in parts)

    def visit_candidates(self, node: SearchNode):
        m = node.matrix
        for name, pair, (x, y, z) in self.initial:
            rows = m.rows
            zz = rows[2][0] * x + rows[2][1] * y + rows[2][2] * z
            k = Fraction(rows[0][0] * x + rows[0][1] * y + rows[0][2] * z, zz)
            l = Fraction(rows[1][0] * x + rows[1][1] * y + rows[1][2] * z, zz)
            # only pairs that meet every original constraint may update r
            if not check_all(self.constraints, (k, l)):
                continue
            if any(part.den(k, l) == 0 for part in self.obj.parts):
                continue
            value = eval_objective(self.obj, (k, l))
            if self.r is None or value < self.r:
                self.r = value
                self.witness = (node.letters, name, ExponentPair(k, l, pair.eps))
                log.debug("r <- %s at depth %d", value, node.depth)

    def bounds(self, parts):
        """theta bounds over the node region clipped by the closed constraints."""
        verts = []
        for p in parts:
            verts.extend(clip_all(p, self.closed))
        if not verts:
            return None
        try:
            return theta_bounds_vertices(self.obj, verts)
        except InvalidObjectiveError:
            # only the common zero of a part survives; no pair there to improve r
            if all(any(part.den(k, l) == 0 for part in self.obj.parts) for k, l in verts):
                return None
            raise

    def settle(self, node: SearchNode, parts) -> tuple[bool, Fraction | None]:
        """Step 2: decide whether the node stops here.

        Returns (stop, lower bound contributed to the frontier).
        """
        b = self.bounds(parts)
        if b is None:
            return True, None
        lo, hi = b
        if self.r is not None and self.r <= lo:
            return True, None
        if hi - lo < self.config.tolerance or node.depth >= self.config.max_depth:
            return True, lo
        return False, lo

    def add_frontier(self, lo):
        if lo is not None and (self.frontier_lower is None or lo < self.frontier_lower):
            self.frontier_lower = lo

    def run(self) -> SearchResult:
        if self.config.mode == "greedy":
            self.run_greedy()
        else:
            self.run_rigorous()
        return self.result()

    def run_rigorous(self):
        branches = _BRANCHES[self.config.branch_order]
        stack = [SearchNode(IDENTITY, 0, ())]
        while stack:
            node = stack.pop()
            parts = self.region(node.matrix)
            if node.depth > 0 and not self.admissible(parts):
                continue
            self.stats.calls_by_depth[node.depth] += 1
            self.visit_candidates(node)
            stop, lo = self.settle(node, parts)
            if stop:
                self.add_frontier(lo)
                continue
            for letter, mat in reversed(branches):
                stack.append(SearchNode(mat_mul(node.matrix, mat), node.depth + 1,
                                        node.letters + (letter,)))

    def run_greedy(self):
        """One path down the tree: drop children that fail the feasibility
        test and follow the survivor with the smaller region lower bound.
        Graham's own branch rule is not reproduced; this is a stand-in.
        """
        branches = _BRANCHES[self.config.branch_order]
        node = SearchNode(IDENTITY, 0, ())
        parts = self.region(node.matrix)
        root = self.bounds(parts)
        self.root_lower = root[0] if root else None
        while True:
            self.stats.calls_by_depth[node.depth] += 1
            self.visit_candidates(node)
            stop, lo = self.settle(node, parts)
            if stop:
                return
            survivors = []
            for rank, (letter, mat) in enumerate(branches):
                child = SearchNode(mat_mul(node.matrix, mat), node.depth + 1,
                                   node.letters + (letter,))
                child_parts = self.region(child.matrix)
                if not self.admissible(child_parts):
                    continue
                b = self.bounds(child_parts)
                if b is not None:
                    survivors.append((b[0], rank, child, child_parts))
            if not survivors:
                return
            _, _, node, parts = min(survivors, key=lambda s: (s[0], s[1]))

    def result(self) -> SearchResult:
        mode = self.config.mode
        if self.r is None:
            return SearchResult(None, None, None, None, False, self.stats, mode, "infeasible")
        letters, label, pair = self.witness
        word = Word(letters, None, label)
        pair = ExponentPair(pair.k, pair.l, pair.eps, provenance=word)
        if mode == "greedy":
            # a single path proves nothing about the branches it skipped;
            # only the bound over the whole root region is certified
            lower = self.r if self.root_lower is None else min(self.r, self.root_lower)
            attained = False
        else:
            lower = self.r if self.frontier_lower is None else min(self.r, self.frontier_lower)
            attained = lower >= self.r
        return SearchResult(self.r, lower, pair, word, attained, self.stats, mode)


def optimize(obj: MaxObjective, constraints=(), config: SearchConfig | None = None) -> SearchResult:
    """Infimum of ``obj`` over the pair set subject to linear constraints."""
    config = config or SearchConfig()
    return _Search(obj, constraints, config).run()


def greedy_optimize(obj: MaxObjective, constraints=(), config: SearchConfig | None = None) -> SearchResult:
    config = replace(config or SearchConfig(), mode="greedy")
    return _Search(obj, constraints, config).run()


# --- conv P ---------------------------------------------------------------

def adaptive_hull(max_lines: int = 40, tolerance=Fraction(1, 10**15), max_depth: int = 400,
                  initial_pairs=None):
    """Outer polygon for conv P refined along its lower-left boundary.

    Starts from the chain (0,1), (1/2,1/2).  For each chain edge the search
    minimizes the linear form normal to it; if the certified minimum already
    equals the form on the edge, the edge is final, otherwise the witness is
    inserted and both new edges are refined.  Returns the polygon and the
    directions used.
    """
    cfg = SearchConfig(tolerance=tolerance, max_depth=max_depth, initial_pairs=initial_pairs)
    chain = [(Fraction(0), Fraction(1)), (Fraction(1, 2), Fraction(1, 2))]
    poly = triangle_T().parts[0]
    directions = []
    pending = [0]
    while pending and len(directions) < max_lines:
        i = pending.pop(0)
        (k1, l1), (k2, l2) = chain[i], chain[i + 1]
        alpha, beta = l1 - l2, k2 - k1
        edge_value = alpha * k1 + beta * l1
        res = optimize(linear_objective(alpha, beta), [], cfg)
        directions.append((alpha, beta))
        poly = clip_halfplane(poly, LinearConstraint(alpha, beta, -res.lower_bound))
        w = res.witness_pair.point
        if res.lower_bound >= edge_value or w in chain or res.value >= edge_value:
            continue
        chain.insert(i + 1, w)
        pending = [j + 1 if j > i else j for j in pending] + [i, i + 1]
    return poly, directions


def _edge_balance_points(obj: MaxObjective, s, e):
    """Points of segment s-e where two parts of the objective are equal."""
    out = []
    ds = (e[0] - s[0], e[1] - s[1])
    lin = []
    for part in obj.parts:
        n0, n1 = part.num(*s), part.a * ds[0] + part.b * ds[1]
        d0, d1 = part.den(*s), part.d * ds[0] + part.e * ds[1]
        lin.append((n0, n1, d0, d1))
    for i in range(len(lin)):
        for j in range(i + 1, len(lin)):
            ni0, ni1, di0, di1 = lin[i]
            nj0, nj1, dj0, dj1 = lin[j]
            # (ni0 + ni1 t)(dj0 + dj1 t) - (nj0 + nj1 t)(di0 + di1 t) = 0
            a = ni1 * dj1 - nj1 * di1
            b = ni0 * dj1 + ni1 * dj0 - nj0 * di1 - nj1 * di0
            c = ni0 * dj0 - nj0 * di0
            roots = []
            if a == 0:
                if b != 0:
                    roots.append(-c / b)
            else:
                disc = b * b - 4 * a * c
                if disc >= 0:
                    num, den = disc.numerator, disc.denominator
                    rn, rd = isqrt(num), isqrt(den)
                    if rn * rn == num and rd * rd == den:
                        sq = Fraction(rn, rd)
                    else:
                        scale = 10**40
                        sq = Fraction(isqrt(num * den * scale * scale), den * scale)
                    roots.extend(((-b + sq) / (2 * a), (-b - sq) / (2 * a)))
            for t in roots:
                if 0 <= t <= 1:
                    out.append((s[0] + t * ds[0], s[1] + t * ds[1]))
    return out


def _polygon_minimum(obj: MaxObjective, vertices):
    """Minimum of the objective over a convex polygon via vertices and edge balance points."""
    cands = list(vertices)
    n = len(vertices)
    if n >= 2:
        for i in range(n if n > 2 else 1):
            cands.extend(_edge_balance_points(obj, vertices[i], vertices[(i + 1) % n]))
    best = None
    for p in cands:
        if any(part.den(*p) <= 0 for part in obj.parts):
            continue
        v = eval_objective(obj, p)
        if best is None or v < best[0]:
            best = (v, p)
    return best


def optimize_hull(obj: MaxObjective, constraints=(), config: SearchConfig | None = None,
                  hull: ConvexPolygon | None = None) -> SearchResult:
    """Infimum over the convex hull of the pair set, using an outer polygon.

    Single-part objectives: the search over the pair set, plus the
    constraint lines cut by the polygon.  Several parts: the polygon clipped
    by the constraints is scanned at its vertices and at the points of its
    edges where two parts balance.  The polygon contains conv P, so the
    second kind of candidate can undershoot by at most the hull error.
    """
    config = config or SearchConfig()
    constraints = list(constraints)
    base = optimize(obj, constraints, config)
    if hull is None:
        hull, directions = adaptive_hull()
        lines = len(directions)
    else:
        lines = None
    closed = [c.closed() for c in constraints]
    candidates = []
    if len(obj.parts) == 1:
        for c in constraints:
            line = [c.closed(), LinearConstraint(-c.alpha, -c.beta, -c.gamma)]
            others = [o for o in closed if o is not c]
            seg = clip_all(list(hull.vertices), line + others)
            if seg:
                best = _polygon_minimum(obj, seg)
                if best is not None:
                    candidates.append(best)
    else:
        clipped = clip_all(list(hull.vertices), closed)
        if clipped:
            best = _polygon_minimum(obj, clipped)
            if best is not None:
                candidates.append(best)
    note = f"hull support lines: {lines}" if lines is not None else "hull supplied"
    best = min(candidates, default=None, key=lambda c: c[0])
    if best is None or (base.value is not None and base.value <= best[0]):
        base.note = note
        return base
    value, (k, l) = best
    pair = ExponentPair(k, l, False)
    lower = value if base.lower_bound is None else min(value, base.lower_bound)
    return SearchResult(value, lower, pair, None, False, base.stats, base.mode, note)
