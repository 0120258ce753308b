import random
from decimal import Decimal
from fractions import Fraction

import pytest

from exppair_lp import applications as app
from exppair_lp.lp import eval_frac, eval_objective
from exppair_lp.optimizer import SearchConfig
from exppair_lp.pairs import eval_word

from oracles import apply_word, CATALOG


def test_specs_validate():
    with pytest.raises(ValueError):
        app.XiSpec(3, 3)
    with pytest.raises(ValueError):
        app.MuSpec(Fraction(2))
    assert app.MuSpec("3/5").sigma == Fraction(3, 5)


@pytest.mark.parametrize("ab,value,word", [
    ((1, 2), Fraction(269, 1217), "BA H05"),
    ((1, 4), Fraction(111, 790), "H05"),
    ((3, 4), Fraction(1819, 19369), "BA A H05"),
])
def test_xi_exact_rows(ab, value, word):
    row = app.xi(app.XiSpec(*ab))
    assert row.value == value and str(row.witness) == word and row.attained
    # the value is the objective at the witness, via the formula oracle
    p = apply_word(row.witness.letters, CATALOG[row.witness.initial])
    assert eval_objective(app.xi_objective(*ab), p) == value


def test_xi_infinite_row_reports_table_word():
    row = app.xi(app.XiSpec(1, 8))
    target = app.surd(5, 1, 809, 392)
    assert abs(Decimal(row.value.numerator) / Decimal(row.value.denominator) - target) < Decimal("1e-9")
    assert row.extra["table_word"] == "A (BA)^4 (A^2 BA A)^inf I"
    tw = row.extra["table_word_value"]
    assert abs(Decimal(tw.numerator) / Decimal(tw.denominator) - target) < Decimal("1e-11")
    assert not row.attained


def test_xi_hull_flag_not_above_plain():
    plain = app.xi(app.XiSpec(1, 4))
    hull = app.xi(app.XiSpec(1, 4), hull=True)
    assert hull.value <= plain.value


def test_mu_rows():
    assert app.mu_sigma(app.MuSpec(Fraction(3, 5))).value == Fraction(1409, 12170)
    assert app.mu_sigma(app.MuSpec(Fraction(4, 5))).value == Fraction(3, 71)


def test_machine_line_format():
    row = app.mu_sigma(app.MuSpec(Fraction(3, 5)))
    assert row.machine_line() == "value=1409/12170 word=A BA H05 attained=true calls=0:1,1:1,2:1,3:1,4:1,5:1"


def test_delta_case_objectives_match_formulas():
    rng = random.Random(7)
    for a, b in ((1, 2), (1, 32), (3, 16), (2, 7)):
        (t1, o1, lc1), (t2, o2, lc2) = app.delta_cases(a, b)
        hits = {t1: 0, t2: 0}
        while min(hits.values()) < 100:
            k = Fraction(rng.randint(1, 999), 6000)
            l = Fraction(2, 3) + Fraction(rng.randint(1, 999), 3000) * (Fraction(1, 3) - k)
            first = (2 * l - 1) * a >= 2 * k * b
            if first:
                assert eval_frac(o1.parts[0], (k, l)) == 2 * (k + l - Fraction(1, 2)) / (a + b)
                assert all(c.value(k, l) >= 0 for c in lc1)
                hits[t1] += 1
            else:
                assert eval_frac(o2.parts[0], (k, l)) == k / ((1 - l) * a + k * b)
                assert all(c.value(k, l) > 0 for c in lc2)
                hits[t2] += 1


def test_delta_two_small():
    row = app.delta_two(app.DivisorTwoSpec(1, 2))
    assert row.value == Fraction(269, 1217)
    assert row.extra["case"] == "first"
    assert set(row.extra["cases"]) == {"first", "second"}


def test_delta_two_beats_theorem_pair():
    row = app.delta_two(app.DivisorTwoSpec(1, 32))
    alpha, _ = app.thm4_alpha(5)
    assert alpha == Fraction(11, 410)
    assert row.value <= alpha
    assert row.value < Fraction(1, 37)


@pytest.mark.parametrize("r", range(5, 17))
def test_thm4(r):
    alpha, pair = app.thm4_alpha(r)
    assert alpha < Fraction(1, 2**r + r)
    assert pair.point == apply_word(app.thm4_word(r).letters, CATALOG["I"])


def test_thm4_r5_pair():
    assert app.thm4_pair(5).k == Fraction(11, 810)
    with pytest.raises(ValueError):
        app.thm4_alpha(4)


def test_thm5_values():
    assert app.thm5_alpha(4) == Fraction(17, 388)
    assert app.thm5_alpha(5) == Fraction(17, 711)
    assert str(app.thm5_word(5)) == "A^2 BA A HW"
    for r in range(4, 12):
        app.thm5_alpha(r)
    with pytest.raises(ValueError):
        app.thm5_alpha(3)


def test_thm6_decreasing_and_bounded():
    vals = [app.thm6_theta(r) for r in range(10, 17)]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        app.thm6_theta(9)


def test_thm6_readings_coincide():
    w = app.thm6_witnesses(10)
    assert len({p.point for p in w.values()}) == 1
    # B A^2 B and BA BA B agree on (0,1)
    assert apply_word(("B", "A", "A", "B"), CATALOG["I"]) == apply_word(("BA", "BA", "B"), CATALOG["I"])


def test_reference_table_shapes():
    assert len(app.TABLE_XI) == 15
    surd_rows = [ab for ab, ref in app.TABLE_XI.items() if ref.exact is None]
    assert len(surd_rows) == 6
    for ab, ref in app.TABLE_XI.items():
        if ref.exact is not None:
            assert ref.word.finite
            obj = app.xi_objective(*ab)
            assert eval_objective(obj, eval_word(ref.word)) == ref.exact


def test_table_mu_call_counts():
    rows = app.table_mu(depths=(100,), config=SearchConfig(tolerance=Fraction(1, 10**9)))
    for row in rows:
        assert 0 < row.extra["calls_by_depth_limit"][100] <= 1600


def test_parallel_table_matches_serial():
    serial = [r.value for r in app.table_mu(depths=(100,))]
    parallel = [r.value for r in app.table_mu(depths=(100,), jobs=2)]
    assert serial == parallel
