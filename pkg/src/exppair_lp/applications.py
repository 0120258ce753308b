"""Divisor-problem and zeta-exponent front ends built on the search.

Objectives:

* ``xi(a, b)``: max{(k+l)/((k+1)(a+b)), k/(kb + a(1+k-l))} over the pairs.
* ``mu_sigma(s)``: (k+l-s)/2 subject to l-k >= s.
* ``delta_two(a, b)``: the two cases of the estimate for Delta(a, b; x) with
  (k, l) = A(kappa, lambda), written as k < 1/6, l > 2/3.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from fractions import Fraction

from .lp import FracLinear, LinearConstraint, MaxObjective, eval_objective
from .optimizer import SearchConfig, SearchResult, optimize, optimize_hull
from .pairs import ExponentPair, Word, eval_word, parse_word

SIXTH = Fraction(1, 6)
TWO_THIRDS = Fraction(2, 3)

TABLE_TOLERANCE = Fraction(1, 10**9)


@dataclass(frozen=True)
class DivisorTwoSpec:
    a: int
    b: int

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise ValueError(f"need 0 < a < b, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class XiSpec(DivisorTwoSpec):
    pass


@dataclass(frozen=True)
class MuSpec:
    sigma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "sigma", Fraction(self.sigma))
        if not Fraction(1, 2) <= self.sigma <= 1:
            raise ValueError(f"sigma must lie in [1/2, 1], got {self.sigma}")


@dataclass
class ReportRow:
    label: str
    value: Fraction | None
    witness: Word | None
    attained: bool
    result: SearchResult | None = None
    tolerance: Fraction = TABLE_TOLERANCE
    extra: dict = field(default_factory=dict)

    def value_text(self, digits: int = 10) -> str:
        if self.value is None:
            return "infeasible"
        if self.attained:
            return str(self.value)
        return decimal_text(self.value, digits)

    def machine_line(self) -> str:
        calls = self.result.stats.format() if self.result is not None else ""
        return (f"value={self.value_text()} word={'-' if self.witness is None else self.witness} "
                f"attained={str(self.attained).lower()} calls={calls}")


def decimal_text(q: Fraction, digits: int = 10) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 10
        d = Decimal(q.numerator) / Decimal(q.denominator)
        return f"{d:.{digits}f}"


def surd(p: int, q: int, n: int, d: int) -> Decimal:
    """(p + q*sqrt(n)) / d to 50 significant digits."""
    with localcontext() as ctx:
        ctx.prec = 50
        return (Decimal(p) + Decimal(q) * Decimal(n).sqrt()) / Decimal(d)


# --- objectives -----------------------------------------------------------

def xi_objective(a: int, b: int) -> MaxObjective:
    s = a + b
    return MaxObjective.of(
        FracLinear(1, 1, 0, s, 0, s),
        FracLinear(1, 0, 0, s, -a, a),
    )


def mu_objective(sigma) -> tuple[MaxObjective, list[LinearConstraint]]:
    sigma = Fraction(sigma)
    obj = MaxObjective.of(FracLinear(Fraction(1, 2), Fraction(1, 2), -sigma / 2))
    return obj, [LinearConstraint(-1, 1, -sigma)]


def _a_image_constraints():
    return [LinearConstraint(-1, 0, SIXTH, True), LinearConstraint(0, 1, -TWO_THIRDS, True)]


def delta_cases(a: int, b: int):
    """[(tag, objective, constraints)] for the two cases of the Delta(a, b) estimate."""
    first = MaxObjective.of(FracLinear(Fraction(2, a + b), Fraction(2, a + b), Fraction(-1, a + b)))
    second = MaxObjective.of(FracLinear(1, 0, 0, b, -a, a))
    # (2l-1)a - 2kb >= 0, and its strict negation
    lc1 = [LinearConstraint(-2 * b, 2 * a, -a)] + _a_image_constraints()
    lc2 = [LinearConstraint(2 * b, -2 * a, a, True)] + _a_image_constraints()
    return [("first", first, lc1), ("second", second, lc2)]


def delta_first_alpha(k, l, a, b) -> Fraction:
    return 2 * (k + l - Fraction(1, 2)) / (a + b)


def delta_second_alpha(k, l, a, b) -> Fraction:
    return k / ((1 - l) * a + k * b)


# --- front ends -----------------------------------------------------------

def _row(label, res: SearchResult, config: SearchConfig, **extra) -> ReportRow:
    return ReportRow(label, res.value, res.witness_word, res.attained, res,
                     config.tolerance, dict(extra))


def delta_two(spec: DivisorTwoSpec, config: SearchConfig | None = None) -> ReportRow:
    config = config or SearchConfig(tolerance=TABLE_TOLERANCE, max_depth=200)
    best = None
    runs = {}
    for tag, obj, lc in delta_cases(spec.a, spec.b):
        res = optimize(obj, lc, config)
        runs[tag] = res
        if res.feasible and (best is None or res.value < best[1].value):
            best = (tag, res)
    if best is None:
        raise ValueError(f"both cases are infeasible for a={spec.a}, b={spec.b}")
    tag, res = best
    return _row(f"Delta({spec.a},{spec.b})", res, config, case=tag,
                cases={t: r.value for t, r in runs.items()})


def thm4_pair(r: int) -> ExponentPair:
    """Closed form of A^(r-1) BA A^(r-4) (1/6, 2/3)."""
    p = 2**r
    den = 2 ** (2 * r + 1) - (2 * r + 4) * p + 4 * r
    k = Fraction(p - 2 * r, den)
    l = 1 - Fraction(r * p - 2 * r * r + 2 * r - 4, den)
    return ExponentPair(k, l, False)


def thm4_word(r: int) -> Word:
    # (1/6, 2/3) = A BA (0, 1)
    return Word(("A",) * (r - 1) + ("BA",) + ("A",) * (r - 4) + ("A", "BA"), None, "I")


def thm4_alpha(r: int) -> tuple[Fraction, ExponentPair]:
    """Exponent for Delta(1, 2^r) from the pair A^(r-1) BA A^(r-4) (1/6, 2/3)."""
    if r < 5:
        raise ValueError("the closed form needs r >= 5")
    p = 2**r
    alpha = Fraction(p - 2 * r, 2 ** (2 * r) - r * p - 2 * r * r + 2 * r - 4)
    pair = thm4_pair(r)
    evaluated = eval_word(thm4_word(r))
    if evaluated != pair:
        raise ArithmeticError(f"closed form and word evaluation differ at r={r}")
    if not 2 * pair.l - 2 * p * pair.k - 1 < 0:
        raise ArithmeticError(f"pair at r={r} is not in the second case")
    if delta_second_alpha(pair.k, pair.l, 1, p) != alpha:
        raise ArithmeticError(f"second-case exponent differs from the closed form at r={r}")
    return alpha, pair


def thm5_word(r: int) -> Word:
    return Word(("A",) * (r - 3) + ("BA", "A"), None, "HW")


def thm5_alpha(r: int) -> Fraction:
    """1 / (2^r + 3r - 88/17), checked against A^(r-3) BA A HW."""
    if r < 4:
        raise ValueError("validated only for r >= 4 (the witness word needs r >= 3, a < b needs 2^r > 3)")
    alpha = 1 / (Fraction(2**r) + 3 * r - Fraction(88, 17))
    pair = eval_word(thm5_word(r))
    if not (2 * pair.l - 1) * 3 < 2 * pair.k * 2**r:
        raise ArithmeticError(f"witness at r={r} is not in the second case")
    if delta_second_alpha(pair.k, pair.l, 3, 2**r) != alpha:
        raise ArithmeticError(f"witness exponent differs from the closed form at r={r}")
    return alpha


def thm6_theta(r: int) -> Fraction:
    if r < 10:
        raise ValueError("the formula is stated for r >= 10")
    p = 2**r
    num = 26 * p**2 - (29 * r + 41) * p + 16 * r * r + 12 * r + 32
    den = 26 * p**3 - (16 * r + 41) * p**2 + (24 * r - 3) * p + 16 * r + 12
    theta = Fraction(num, den)
    if not theta < Fraction(1, p + 1):
        raise ArithmeticError(f"theta(1, 2^{r}, 2^{r}) is not below 1/(2^r + 1)")
    return theta


def thm6_witnesses(r: int) -> dict[str, ExponentPair]:
    """Both readings of A^(r-1) B A^(r-2) BA BA^2 B (0,1).

    ``BA^2`` is read either as B followed by A^2 or as (BA)^2.
    """
    head = ("A",) * (r - 1) + ("B",) + ("A",) * (r - 2) + ("BA",)
    readings = {"B A^2": ("B", "A", "A"), "(BA)^2": ("BA", "BA")}
    return {name: eval_word(Word(head + mid + ("B",), None, "I"))
            for name, mid in readings.items()}


def xi(spec: XiSpec, config: SearchConfig | None = None, hull: bool = False) -> ReportRow:
    config = config or SearchConfig(tolerance=TABLE_TOLERANCE, max_depth=200)
    obj = xi_objective(spec.a, spec.b)
    res = optimize_hull(obj, [], config) if hull else optimize(obj, [], config)
    row = _row(f"Xi({spec.a},{spec.b})", res, config)
    ref = TABLE_XI.get((spec.a, spec.b))
    if ref is not None and ref.word.tail is not None:
        row.extra["table_word"] = str(ref.word)
        row.extra["table_word_value"] = word_value(obj, ref.word)
    return row


def word_value(obj: MaxObjective, word: Word, tolerance=Fraction(1, 10**12)) -> Fraction:
    return eval_objective(obj, eval_word(word, tolerance=tolerance))


def mu_sigma(spec: MuSpec, config: SearchConfig | None = None) -> ReportRow:
    config = config or SearchConfig(tolerance=TABLE_TOLERANCE, max_depth=1000)
    obj, lc = mu_objective(spec.sigma)
    res = optimize(obj, lc, config)
    return _row(f"mu({spec.sigma})", res, config)


# --- reference tables -----------------------------------------------------

M_CYCLE = "(BA)^6 (A BA)^2 BA A^2"


@dataclass(frozen=True)
class XiReference:
    word: Word
    exact: Fraction | None = None
    surd: tuple[int, int, int, int] | None = None

    def decimal(self) -> Decimal:
        if self.exact is not None:
            return Decimal(self.exact.numerator) / Decimal(self.exact.denominator)
        return surd(*self.surd)


def _ref(word: str, exact=None, surd_form=None) -> XiReference:
    word = word.replace("M^inf", f"({M_CYCLE})^inf")
    return XiReference(parse_word(word), exact, surd_form)


_C = 37368753
TABLE_XI: dict[tuple[int, int], XiReference] = {
    (1, 2): _ref("BA H05", Fraction(269, 1217)),
    (1, 3): _ref("(BA)^2 A BA H05", Fraction(1486, 8647)),
    (1, 4): _ref("H05", Fraction(111, 790)),
    (1, 5): _ref("A BA A^2 BA A (BA)^2 A^2 M^inf I", surd_form=(15921, -2, _C, 30437)),
    (1, 6): _ref("(A BA)^3 (BA)^3 A^3 BA I", Fraction(669, 6305)),
    (1, 7): _ref("A (BA)^2 BA A (BA)^2 A^2 M^inf I", surd_form=(9370, -1, _C, 34469)),
    (1, 8): _ref("A (BA)^4 (A^2 BA A)^inf I", surd_form=(5, 1, 809, 392)),
    (1, 9): _ref("A (BA)^2 A M^inf I", surd_form=(10551, -1, _C, 56976)),
    (1, 10): _ref("A (BA)^2 (A^2 (BA)^2)^2 A BA H05", Fraction(150509, 2096993)),
    (2, 3): _ref("BA A (BA)^2 A^2 M^inf I", surd_form=(-4047, 1, _C, 15688)),
    (2, 4): _ref("BA H05", Fraction(269, 2434)),
    (2, 5): _ref("M^inf I", surd_form=(-4311, 1, _C, 18672)),
    (3, 4): _ref("BA A H05", Fraction(1819, 19369)),
    (3, 5): _ref("BA A (BA)^3 A^2 (BA)^3 A (BA)^5 A^2 BA I", Fraction(63916, 774807)),
    (4, 5): _ref("BA A H05", Fraction(1819, 24903)),
}

# sigma -> exact value, or (decimal string, digits) for rows known only numerically
TABLE_MU: dict[Fraction, Fraction | str] = {
    Fraction(3, 5): Fraction(1409, 12170),
    Fraction(2, 3): "0.0879154",
    Fraction(3, 4): "0.0581840",
    Fraction(4, 5): Fraction(3, 71),
}


def _xi_row(args):
    spec, config = args
    return xi(spec, config)


def _mu_row(args):
    sigma, depths, config = args
    rows = [mu_sigma(MuSpec(sigma), replace(config, max_depth=d)) for d in depths]
    row = rows[-1]
    row.extra["calls_by_depth_limit"] = {d: r.result.stats.calls for d, r in zip(depths, rows)}
    return row


def table_xi(config: SearchConfig | None = None, jobs: int = 1) -> list[ReportRow]:
    items = [(XiSpec(a, b), config) for a, b in TABLE_XI]
    return _map(_xi_row, items, jobs)


def table_mu(depths=(100, 1000), config: SearchConfig | None = None,
             jobs: int = 1) -> list[ReportRow]:
    """One row per sigma, searched at each depth limit; the deepest run is reported."""
    config = config or SearchConfig(tolerance=TABLE_TOLERANCE)
    items = [(sigma, tuple(depths), config) for sigma in TABLE_MU]
    return _map(_mu_row, items, jobs)


def _map(fn, items, jobs):
    if jobs <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
