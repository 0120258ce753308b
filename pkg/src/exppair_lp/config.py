"""JSON problem files.

Schema (all numbers exact: integers or strings such as ``"-3/5"``)::

    {
      "objective": [{"num": [a, b, c], "den": [d, e, f]}, ...],
      "constraints": [{"coeffs": [alpha, beta, gamma], "rel": ">=" | ">"}, ...],
      "search": {
        "tolerance": "1/1000000000",
        "max_depth": 1000,
        "mode": "rigorous" | "greedy",
        "branch_order": "A-first" | "BA-first",
        "initial_pairs": ["I", "H05", ...],
        "root_region": "triangle" | "cover",
        "objective_cuts": true
      }
    }

Each objective part is (a*k + b*l + c) / (d*k + e*l + f); ``den`` defaults
to ``[0, 0, 1]``.  A constraint reads alpha*k + beta*l + gamma REL 0.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .geometry import catalog_cover, triangle_T
from .lp import FracLinear, InvalidObjectiveError, LinearConstraint, MaxObjective
from .optimizer import SearchConfig
from .pairs import UnknownPairError, initial_pair


class ConfigError(ValueError):
    pass


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ConfigError(f"{where}: expected an integer or a 'p/q' string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip().replace("−", "-"))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"{where}: cannot read {value!r} as a rational") from None
    raise ConfigError(f"{where}: expected an integer or a 'p/q' string, got {value!r}")


def _triple(value, where):
    if not isinstance(value, list) or len(value) != 3:
        raise ConfigError(f"{where}: expected a list of three numbers")
    return [parse_rational(v, f"{where}[{i}]") for i, v in enumerate(value)]


def parse_config(text: str) -> tuple[MaxObjective, list[LinearConstraint], SearchConfig]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("top level: expected an object")
    unknown = set(data) - {"objective", "constraints", "search"}
    if unknown:
        raise ConfigError(f"top level: unknown keys {sorted(unknown)}")

    parts = data.get("objective")
    if not isinstance(parts, list) or not parts:
        raise ConfigError("objective: expected a nonempty list of parts")
    fls = []
    for i, part in enumerate(parts):
        where = f"objective[{i}]"
        if not isinstance(part, dict) or "num" not in part:
            raise ConfigError(f"{where}: expected an object with 'num' and optional 'den'")
        num = _triple(part["num"], f"{where}.num")
        den = _triple(part.get("den", [0, 0, 1]), f"{where}.den")
        try:
            fls.append(FracLinear(*num, *den))
        except InvalidObjectiveError as exc:
            raise ConfigError(f"{where}: {exc}") from None

    constraints = []
    for i, c in enumerate(data.get("constraints", [])):
        where = f"constraints[{i}]"
        if not isinstance(c, dict) or "coeffs" not in c:
            raise ConfigError(f"{where}: expected an object with 'coeffs' and 'rel'")
        alpha, beta, gamma = _triple(c["coeffs"], f"{where}.coeffs")
        rel = c.get("rel", ">=")
        if rel not in (">", ">="):
            raise ConfigError(f"{where}.rel: expected '>' or '>=', got {rel!r}")
        if alpha == 0 and beta == 0:
            raise ConfigError(f"{where}: constraint has no k or l term")
        constraints.append(LinearConstraint(alpha, beta, gamma, rel == ">"))

    return MaxObjective(tuple(fls)), constraints, _search_config(data.get("search", {}))


def _search_config(s) -> SearchConfig:
    if not isinstance(s, dict):
        raise ConfigError("search: expected an object")
    kwargs = {}
    if "tolerance" in s:
        tol = parse_rational(s["tolerance"], "search.tolerance")
        if tol <= 0:
            raise ConfigError("search.tolerance: must be positive")
        kwargs["tolerance"] = tol
    if "max_depth" in s:
        depth = s["max_depth"]
        if not isinstance(depth, int) or isinstance(depth, bool) or depth < 1:
            raise ConfigError("search.max_depth: expected a positive integer")
        kwargs["max_depth"] = depth
    for key, allowed in (("mode", ("rigorous", "greedy")),
                         ("branch_order", ("A-first", "BA-first"))):
        if key in s:
            if s[key] not in allowed:
                raise ConfigError(f"search.{key}: expected one of {allowed}, got {s[key]!r}")
            kwargs[key] = s[key]
    if "initial_pairs" in s:
        labels = s["initial_pairs"]
        if not isinstance(labels, list) or not labels:
            raise ConfigError("search.initial_pairs: expected a nonempty list of labels")
        for label in labels:
            try:
                initial_pair(label)
            except (UnknownPairError, TypeError):
                raise ConfigError(f"search.initial_pairs: unknown label {label!r}") from None
        kwargs["initial_pairs"] = tuple(labels)
    if "root_region" in s:
        regions = {"triangle": triangle_T, "cover": catalog_cover}
        if s["root_region"] not in regions:
            raise ConfigError(f"search.root_region: expected one of {sorted(regions)}")
        kwargs["root_region"] = regions[s["root_region"]]()
    if "objective_cuts" in s:
        if not isinstance(s["objective_cuts"], bool):
            raise ConfigError("search.objective_cuts: expected true or false")
        kwargs["objective_cuts"] = s["objective_cuts"]
    unknown = set(s) - {"tolerance", "max_depth", "mode", "branch_order", "initial_pairs",
                        "root_region", "objective_cuts"}
    if unknown:
        raise ConfigError(f"search: unknown keys {sorted(unknown)}")
    return SearchConfig(**kwargs)
