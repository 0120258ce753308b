import random
from fractions import Fraction
from math import gcd

import pytest

from exppair_lp.geometry import catalog_cover, lemma1_cover, refine_cover
from exppair_lp.lp import FracLinear, LinearConstraint, MaxObjective, eval_objective, linear_objective
from exppair_lp.optimizer import (
    SearchConfig, adaptive_hull, greedy_optimize, optimize, optimize_hull,
)
from exppair_lp.pairs import UnknownPairError, eval_word
from exppair_lp.projective import IDENTITY, MAT_A, MAT_BA, mat_mul

from oracles import (
    CATALOG, all_pairs, apply_word, brute_force_min, random_instance, segment_min_two_linear,
)

EXAMPLE = MaxObjective.of(FracLinear(Fraction(11, 10), 0, 0), FracLinear(0, 1, Fraction(-1, 2)))

POINTS_8 = all_pairs(8)


def build(parts, constraints):
    obj = MaxObjective(tuple(FracLinear(*p) for p in parts))
    lc = [LinearConstraint(a, b, c, s) for a, b, c, s in constraints]
    return obj, lc


def test_example_value_and_witness():
    res = optimize(EXAMPLE)
    assert res.value == Fraction(176, 1025)
    assert str(res.witness_word) == "H05"
    assert res.attained and res.lower_bound == res.value
    assert res.stats.calls == 1


@pytest.mark.parametrize("seed", range(15))
def test_matches_brute_force_depth_8(seed):
    parts, constraints = random_instance(random.Random(1000 + seed))
    obj, lc = build(parts, constraints)
    res = optimize(obj, lc, SearchConfig(tolerance=0, max_depth=8))
    assert res.value == brute_force_min(parts, constraints, POINTS_8)
    if res.value is not None:
        # the witness reproduces the value through the formula oracle
        w = res.witness_word
        p = apply_word(w.letters, CATALOG[w.initial])
        assert eval_objective(obj, p) == res.value


@pytest.mark.parametrize("seed", range(10))
def test_cuts_do_not_change_value(seed):
    parts, constraints = random_instance(random.Random(2000 + seed))
    obj, lc = build(parts, constraints)
    on = optimize(obj, lc, SearchConfig(tolerance=0, max_depth=7))
    off = optimize(obj, lc, SearchConfig(tolerance=0, max_depth=7, objective_cuts=False))
    assert on.value == off.value
    assert on.stats.calls <= off.stats.calls


@pytest.mark.parametrize("seed", range(6))
def test_branch_order_and_root_region_do_not_change_value(seed):
    parts, constraints = random_instance(random.Random(3000 + seed))
    obj, lc = build(parts, constraints)
    base = optimize(obj, lc, SearchConfig(tolerance=0, max_depth=7)).value
    for cfg in (SearchConfig(tolerance=0, max_depth=7, branch_order="BA-first"),
                SearchConfig(tolerance=0, max_depth=7, root_region=catalog_cover())):
        assert optimize(obj, lc, cfg).value == base


def test_lower_bound_brackets_value():
    obj = MaxObjective.of(FracLinear(1, 1, 0, 3, 0, 3), FracLinear(1, 0, 0, 3, -1, 1))
    res = optimize(obj, [], SearchConfig(tolerance=Fraction(1, 10**6), max_depth=60))
    assert res.lower_bound <= res.value
    assert res.value - res.lower_bound < Fraction(1, 10**6)


def test_infeasible():
    res = optimize(linear_objective(0, 1), [LinearConstraint(0, 1, -2)])
    assert not res.feasible and res.value is None and res.note == "infeasible"


def test_strict_boundary_rejected():
    # l > 1 excludes (0,1) itself and nothing else reaches l = 1
    res = optimize(linear_objective(1, 0), [LinearConstraint(0, 1, -1, strict=True)])
    assert not res.feasible
    res = optimize(linear_objective(1, 0), [LinearConstraint(0, 1, -1)])
    assert res.value == 0


def test_initial_pairs_subset():
    res = optimize(EXAMPLE, [], SearchConfig(initial_pairs=("I",), max_depth=60))
    assert res.witness_word.initial == "I"
    assert res.value > Fraction(176, 1025)
    with pytest.raises(UnknownPairError):
        optimize(EXAMPLE, [], SearchConfig(initial_pairs=("X",)))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(mode="fast")
    with pytest.raises(ValueError):
        SearchConfig(max_depth=0)
    with pytest.raises(ValueError):
        SearchConfig(branch_order="B-first")


def test_greedy_is_upper_bound():
    for seed in range(8):
        parts, constraints = random_instance(random.Random(4000 + seed))
        obj, lc = build(parts, constraints)
        exact = optimize(obj, lc, SearchConfig(tolerance=0, max_depth=8))
        greedy = greedy_optimize(obj, lc, SearchConfig(tolerance=0, max_depth=8))
        if exact.value is None:
            assert greedy.value is None
            continue
        if greedy.value is not None:
            assert greedy.value >= exact.value
            assert greedy.lower_bound <= exact.value
            assert not greedy.attained
            assert greedy.mode == "greedy"


def test_matrices_stay_primitive_along_search():
    m = IDENTITY
    for i in range(40):
        m = mat_mul(m, MAT_A if i % 3 else MAT_BA)
        g = 0
        for e in m.entries():
            g = gcd(g, e)
        assert g == 1


def test_refined_root_region_same_value():
    mu_obj = MaxObjective.of(FracLinear(Fraction(1, 2), Fraction(1, 2), Fraction(-3, 10)))
    lc = [LinearConstraint(-1, 1, Fraction(-3, 5))]
    # pairs generated from (0,1) and the catalog all lie in the catalog cover
    base = optimize(mu_obj, lc)
    assert base.value == Fraction(1409, 12170)
    assert optimize(mu_obj, lc, SearchConfig(root_region=catalog_cover())).value == base.value
    # the refined rectangle cover only covers P(1/6,2/3), so restrict to I, whose
    # generated set is {(0,1),(1/2,1/2)} plus P(1/6,2/3)
    cover = refine_cover(lemma1_cover(), 2)
    assert all(cover.contains(p) for _, _, p in all_pairs(6, labels={"I"})
               if p not in ((0, 1), (Fraction(1, 2), Fraction(1, 2))))


# --- convex hull of the pair set -------------------------------------------

def _segment_scan_min(points):
    """Min of max{11k/10, l-1/2} over every segment between two given pairs."""
    f, g = (Fraction(11, 10), 0, 0), (0, 1, Fraction(-1, 2))
    best = None
    for i, p in enumerate(points):
        for q in points[i:]:
            cand = segment_min_two_linear(f, g, p, q)
            if best is None or cand[1] < best[1]:
                best = cand
    return best


def test_conv_hull_minimum_inner_oracle():
    # a max of two linear forms attains its minimum over a polygon on an edge,
    # so scanning all segments between generated pairs gives the inner-hull minimum
    pts = sorted({p for _, _, p in all_pairs(4, labels={"I", "H05"})})
    point, value = _segment_scan_min(pts)
    assert value == Fraction(94688, 574193)
    assert point == (Fraction(86080, 574193), Fraction(763569, 1148386))
    # the segment realizing it runs from A BA H05 to H05
    a_ba_h05 = apply_word(("A", "BA"), CATALOG["H05"])
    assert a_ba_h05 == (Fraction(269, 2434), Fraction(1755, 2434))
    assert segment_min_two_linear((Fraction(11, 10), 0, 0), (0, 1, Fraction(-1, 2)),
                                  a_ba_h05, CATALOG["H05"])[1] == value


def test_segment_from_origin_pair_to_h05():
    point, value = segment_min_two_linear((Fraction(11, 10), 0, 0), (0, 1, Fraction(-1, 2)),
                                          CATALOG["I"], CATALOG["H05"])
    assert value == Fraction(176, 1057)
    assert point == (Fraction(160, 1057), Fraction(1409, 2114))
    # that point is not optimal over the hull: the inner-hull value is lower
    assert Fraction(94688, 574193) < value


def test_optimize_hull_example():
    res = optimize_hull(EXAMPLE)
    assert abs(res.value - Fraction(94688, 574193)) < Fraction(1, 10**9)
    assert res.witness_word is None and "hull" in res.note
    assert res.lower_bound <= res.value


def test_adaptive_hull_contains_pairs():
    poly, directions = adaptive_hull(max_lines=12, initial_pairs=("I", "H05"))
    assert len(directions) <= 12
    for _, _, p in all_pairs(6, labels={"I", "H05"}):
        assert poly.contains(p)


def test_optimize_hull_linear_with_constraint():
    # linear objective: the hull search adds points on the constraint line
    obj = linear_objective(Fraction(1, 2), Fraction(1, 2), Fraction(-3, 10))
    lc = [LinearConstraint(-1, 1, Fraction(-3, 5))]
    plain = optimize(obj, lc)
    hull = optimize_hull(obj, lc)
    assert hull.value <= plain.value
