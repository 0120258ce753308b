"""Exponent pairs, the van der Corput operators and words over them.

Words are written the usual way: the leftmost letter is applied last, so
``A BA H05`` means ``A(BA(H05))``.  Internally ``Word.letters`` keeps that
written order and ``word_to_matrix`` multiplies the letter matrices left
to right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Union

from .projective import (
    IDENTITY,
    MAT_A,
    MAT_B,
    MAT_BA,
    ProjMatrix,
    apply_raw,
    mat_apply,
    mat_mul,
    mu,
    mu_inv,
    reduce_point,
    ProjPoint,
)

HALF = Fraction(1, 2)

LETTERS = ("A", "B", "BA")
LETTER_MATRIX = {"A": MAT_A, "B": MAT_B, "BA": MAT_BA}


class UnknownPairError(KeyError):
    pass


class WordSyntaxError(ValueError):
    pass


class DivergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ExponentPair:
    k: Fraction
    l: Fraction
    eps: bool = field(default=False, compare=False)
    provenance: "Word | None" = field(default=None, compare=False, repr=False)
    # certified distance to the true point, nonzero only for limits of infinite words
    error: Fraction = field(default=Fraction(0), compare=False, repr=False)

    def __post_init__(self):
        k, l = Fraction(self.k), Fraction(self.l)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "l", l)
        if not (0 <= k <= HALF <= l <= 1 and k + l <= 1):
            raise ValueError(f"({k}, {l}) lies outside the triangle of exponent pairs")

    @property
    def point(self) -> tuple[Fraction, Fraction]:
        return (self.k, self.l)

    def __iter__(self):
        return iter((self.k, self.l))

    def __str__(self):
        tag = "+eps" if self.eps else ""
        return f"({self.k}{tag}, {self.l}{tag})"


_CATALOG = [
    ("I", Fraction(0), Fraction(1), False),
    ("Hux13", Fraction(2, 13), Fraction(35, 52), True),
    ("Hux80", Fraction(13, 80), HALF + Fraction(13, 80), True),
    ("Hux68", Fraction(11, 68), HALF + Fraction(11, 68), True),
    ("HW", Fraction(9, 56), HALF + Fraction(9, 56), True),
    ("W", Fraction(89, 560), HALF + Fraction(89, 560), True),
    ("H05", Fraction(32, 205), HALF + Fraction(32, 205), True),
]


def catalog() -> list[tuple[str, ExponentPair]]:
    """The known initial exponent pairs, in a fixed order."""
    return [(name, ExponentPair(k, l, eps)) for name, k, l, eps in _CATALOG]


def initial_pair(label: str) -> ExponentPair:
    for name, pair in catalog():
        if name == label:
            return pair
    raise UnknownPairError(f"unknown initial pair {label!r}")


def apply_operator(op: str, p: ExponentPair) -> ExponentPair:
    k, l = p.k, p.l
    if op == "A":
        return ExponentPair(k / (2 * (k + 1)), (k + l + 1) / (2 * (k + 1)), p.eps)
    if op == "B":
        return ExponentPair(l - HALF, k + HALF, p.eps)
    if op == "BA":
        return apply_operator("B", apply_operator("A", p))
    raise WordSyntaxError(f"unknown operator {op!r}")


Initial = Union[str, tuple[Fraction, Fraction], None]


@dataclass(frozen=True)
class Word:
    """A finite word, optionally followed by a repeated cycle ``(...)^inf``.

    ``initial`` is a catalog label, an explicit ``(k, l)`` tuple, or ``None``
    when the starting pair is supplied separately.
    """

    letters: tuple[str, ...] = ()
    tail: tuple[str, ...] | None = None
    initial: Initial = "I"

    def __post_init__(self):
        for letter in self.letters + (self.tail or ()):
            if letter not in LETTERS:
                raise WordSyntaxError(f"unknown letter {letter!r}")
        if self.tail is not None and not any(c != "B" for c in self.tail):
            raise WordSyntaxError("a cycle needs at least one A or BA letter")

    @property
    def finite(self) -> bool:
        return self.tail is None

    def __len__(self):
        return len(self.letters)

    def __add__(self, other: "Word") -> "Word":
        if self.tail is not None:
            raise WordSyntaxError("cannot extend a word with an infinite tail")
        return Word(self.letters + other.letters, other.tail, other.initial)

    def __str__(self):
        parts = []
        if self.letters:
            parts.append(format_letters(self.letters))
        if self.tail is not None:
            parts.append(f"({format_letters(self.tail)})^inf")
        if isinstance(self.initial, str):
            parts.append(self.initial)
        elif self.initial is not None:
            parts.append(f"({self.initial[0]},{self.initial[1]})")
        return " ".join(parts) if parts else "id"


def format_letters(letters) -> str:
    out = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        n = j - i
        name = letters[i] if letters[i] != "BA" or n == 1 else "(BA)"
        out.append(name if n == 1 else f"{name}^{n}")
        i = j
    return " ".join(out)


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<pair>\(\s*-?\d+(?:/\d+)?\s*,\s*-?\d+(?:/\d+)?\s*\))"
    r"|(?P<open>\()|(?P<close>\))"
    r"|\^(?P<exp>\d+|inf)"
    r"|(?P<letter>BA|B|A)(?![A-Za-z0-9_])"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r")"
)


def parse_word(text: str, default_initial: Initial = None) -> Word:
    """Parse e.g. ``"A (BA)^4 (A^2 BA A)^inf I"`` or ``"BA H05"``.

    A token exponent binds to the single token, so ``BA^2`` is ``(BA)^2``.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"cannot parse word at {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))

    initial = default_initial
    if tokens and tokens[-1][0] in ("name", "pair"):
        kind, value = tokens.pop()
        if kind == "name":
            initial_pair(value)  # validates the label
            initial = value
        else:
            k, l = value.strip("() ").split(",")
            initial = (Fraction(k.strip()), Fraction(l.strip()))
    for kind, value in tokens:
        if kind in ("name", "pair"):
            raise WordSyntaxError(f"initial pair {value!r} must come last")

    # each item is (letters, is_infinite)
    stack: list[list[tuple[tuple[str, ...], bool]]] = [[]]
    for kind, value in tokens:
        if kind == "letter":
            stack[-1].append(((value,), False))
        elif kind == "open":
            stack.append([])
        elif kind == "close":
            if len(stack) == 1:
                raise WordSyntaxError("unbalanced ')'")
            group = stack.pop()
            if any(inf for _, inf in group):
                raise WordSyntaxError("^inf inside a group")
            stack[-1].append((sum((g for g, _ in group), ()), False))
        elif kind == "exp":
            if not stack[-1]:
                raise WordSyntaxError("exponent without a base")
            base, inf = stack[-1].pop()
            if inf:
                raise WordSyntaxError("exponent applied to an infinite group")
            if value == "inf":
                stack[-1].append((base, True))
            else:
                stack[-1].append((base * int(value), False))
    if len(stack) != 1:
        raise WordSyntaxError("unbalanced '('")
    items = stack[0]
    for i, (_, inf) in enumerate(items):
        if inf and i != len(items) - 1:
            raise WordSyntaxError("^inf must be the last group of a word")
    if items and items[-1][1]:
        prefix = sum((g for g, _ in items[:-1]), ())
        return Word(prefix, items[-1][0], initial)
    return Word(sum((g for g, _ in items), ()), None, initial)


def word_to_matrix(letters) -> ProjMatrix:
    if isinstance(letters, Word):
        letters = letters.letters
    return reduce(mat_mul, (LETTER_MATRIX[c] for c in letters), IDENTITY)


def resolve_initial(initial: Initial) -> ExponentPair:
    if isinstance(initial, str):
        return initial_pair(initial)
    if initial is None:
        raise UnknownPairError("word has no initial pair")
    return ExponentPair(initial[0], initial[1])


def apply_matrix(m: ProjMatrix, pair) -> tuple[Fraction, Fraction]:
    return mu_inv(mat_apply(m, mu(pair)))


def eval_word(w: Word, start: ExponentPair | None = None,
              tolerance: Fraction = Fraction(1, 10**12)) -> ExponentPair:
    """Evaluate a word exactly; an infinite tail is replaced by its fixed point.

    ``start`` overrides the word's initial label.
    """
    if w.tail is None:
        base = start if start is not None else resolve_initial(w.initial)
        k, l = apply_matrix(word_to_matrix(w.letters), base)
        return ExponentPair(k, l, base.eps, provenance=w)
    fp = fixed_point(w.tail, tolerance)
    k, l = apply_matrix(word_to_matrix(w.letters), fp)
    # A and BA contract, B is an isometry, so the prefix keeps the error bound
    return ExponentPair(k, l, False, provenance=w, error=fp.error)


# sqrt(3)/2 rounded up: per-letter contraction factor of A and BA on the triangle
_CONTRACTION = Fraction(866026, 1000000)


def fixed_point(cycle, tolerance: Fraction = Fraction(1, 10**12),
                max_iter: int = 100000) -> ExponentPair:
    """Attracting fixed point of a cyclic word, certified to ``tolerance``.

    Iterates the exact map from (1/6, 2/3).  With per-cycle contraction
    factor q, the distance from the iterate to the fixed point is at most
    q/(1-q) times the last step.
    """
    if isinstance(cycle, Word):
        cycle = cycle.letters
    cycle = tuple(cycle)
    if not cycle:
        raise DivergenceError("empty cycle")
    contracting = sum(1 for c in cycle if c != "B")
    if contracting == 0:
        raise DivergenceError("a cycle of B letters does not contract")
    q = _CONTRACTION ** contracting
    factor = q / (1 - q)
    tolerance = Fraction(tolerance)
    m = word_to_matrix(cycle)
    point = ProjPoint(1, 4, 6)
    prev = mu_inv(point)
    for _ in range(max_iter):
        point = reduce_point(ProjPoint(*apply_raw(m, point)))
        if point.z <= 0:
            raise DivergenceError(f"cycle {format_letters(cycle)} leaves the triangle")
        cur = mu_inv(point)
        step2 = (cur[0] - prev[0]) ** 2 + (cur[1] - prev[1]) ** 2
        if step2 * factor**2 < (tolerance / 2) ** 2:
            k, l = _round_pair(cur, tolerance)
            bound = _dist_upper(step2) * factor + tolerance / 4
            return ExponentPair(k, l, False, provenance=Word((), cycle, None), error=bound)
        prev = cur
    raise DivergenceError(f"no convergence for cycle {format_letters(cycle)}")


def _round_pair(pair, tolerance):
    # snap to a grid finer than the tolerance so later arithmetic stays small;
    # the result is moved by at most tolerance/8 in each coordinate
    den = 8 * (-(-tolerance.denominator // tolerance.numerator))
    k, l = (Fraction(round(c * den), den) for c in pair)
    if 0 <= k <= HALF <= l <= 1 and k + l <= 1:
        return k, l
    return pair


def _dist_upper(d2: Fraction) -> Fraction:
    from math import isqrt

    # rational upper bound on sqrt(d2)
    scale = 10**30
    return Fraction(isqrt(d2.numerator * scale**2 // d2.denominator) + 1, scale)
