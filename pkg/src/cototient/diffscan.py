"""Solutions of f(n) - g(n) = c for multiplicative f, g.

Beyond the plain range scan, this module checks the hypotheses under
which such solution sets are provably thin, and carries out the
construction that turns solutions into an integer point-line
configuration: split each solution n = a * b so that both f(a) and f(b)
stay below sqrt(f(n) * t), and record the point (f(a), g(a)) and the line
(f(b), g(b)).  Multiplicativity makes every such pair incident:
f(a)f(b) - g(a)g(b) = f(n) - g(n) = c.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .arith import FactorTable, MultiplicativeFunction, build_factor_table, factorize
from .geometry import Configuration, is_incident
from .partition import balanced_split


def evaluate_range(
    func: MultiplicativeFunction, n_max: int, table: Optional[FactorTable] = None
) -> list[int]:
    """func(n) for 0 <= n <= n_max (index 0 unused, kept as 0)."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if table is None or table.limit < n_max:
        table = build_factor_table(max(n_max, 2))
    spf = table.smallest_factor.tolist()
    rule = func.prime_power_rule
    vals = [0] * (n_max + 1)
    vals[1] = 1
    ppow = [1] * (n_max + 1)  # p^v_p(n) for p = spf(n)
    exp = [0] * (n_max + 1)
    on_pp: dict[int, int] = {}  # prime power -> rule value
    for n in range(2, n_max + 1):
        p = spf[n]
        m = n // p
        if m % p == 0:
            exp[n] = exp[m] + 1
            ppow[n] = ppow[m] * p
        else:
            exp[n] = 1
            ppow[n] = p
        pe = ppow[n]
        r = on_pp.get(pe)
        if r is None:
            r = rule(p, exp[n])
            if not isinstance(r, int) or r < 1:
                raise ValueError(
                    f"rule of {func.name!r} returned {r!r} at ({p}, {exp[n]})"
                )
            on_pp[pe] = r
        vals[n] = vals[n // pe] * r
    return vals


def scan_difference(
    f: MultiplicativeFunction,
    g: MultiplicativeFunction,
    c: int,
    n_max: int,
    table: Optional[FactorTable] = None,
) -> list[int]:
    """All n in [2, n_max] with f(n) - g(n) = c, ascending."""
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    fv = evaluate_range(f, n_max, table)
    gv = evaluate_range(g, n_max, table)
    return [n for n in range(2, n_max + 1) if fv[n] - gv[n] == c]


@dataclass(frozen=True)
class DifferenceInstance:
    """A difference equation together with its solutions and bound t.

    t bounds f on the prime-power components of every solution; by
    default it is the smallest such bound, making the derived inequalities
    as tight as they can be.
    """

    f: MultiplicativeFunction
    g: MultiplicativeFunction
    c: int
    solutions: tuple[int, ...]
    t: int

    def __post_init__(self) -> None:
        if self.c < 1:
            raise ValueError(f"c must be >= 1, got {self.c}")
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        for n in self.solutions:
            if self.f(n) - self.g(n) != self.c:
                raise ValueError(f"{n} does not solve f(n) - g(n) = {self.c}")


def difference_instance(
    f: MultiplicativeFunction,
    g: MultiplicativeFunction,
    c: int,
    n_max: int,
    t: Optional[int] = None,
    table: Optional[FactorTable] = None,
) -> DifferenceInstance:
    """Scan [2, n_max] and package the result; t defaults to the max
    prime-power f-value seen across the solutions."""
    sols = scan_difference(f, g, c, n_max, table)
    if t is None:
        t = 1
        for n in sols:
            for p, e in factorize(n, table).parts:
                t = max(t, f.prime_power_rule(p, e))
    return DifferenceInstance(f=f, g=g, c=c, solutions=tuple(sols), t=t)


def smoothness_filter(
    solutions: Sequence[int],
    f: MultiplicativeFunction,
    t: int,
    table: Optional[FactorTable] = None,
) -> list[int]:
    """Keep the n whose every prime-power f-value is at most t."""
    kept = []
    for n in solutions:
        parts = factorize(n, table).parts
        if all(f.prime_power_rule(p, e) <= t for p, e in parts):
            kept.append(n)
    return kept


# ---------------------------------------------------------------------------
# hypothesis checking


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class GrowthCensus:
    """Largest observed count(value <= x) / x over a geometric grid of x."""

    max_ratio: float
    at_x: int
    samples: int


@dataclass(frozen=True)
class ConditionReport:
    """Checkable forms of the thinness hypotheses over [2, n_max].

    dominates      f(n) > g(n) for every n > 1 in range
    injective      n -> (f(n), g(n)) has no collision in range
    equation       every claimed solution satisfies f(n) - g(n) = c
    growth_f       census of |{n : f(n) <= x}| / x   (finite report only)
    growth_g       same census for g (the swapped-variant hypothesis)
    smooth_f       every solution has all prime-power f-values <= t
    smooth_g       swapped variant of the above
    """

    n_max: int
    t: int
    dominates: Verdict
    injective: Verdict
    equation: Verdict
    growth_f: GrowthCensus
    growth_g: GrowthCensus
    smooth_f: Verdict
    smooth_g: Verdict


def check_conditions(
    f: MultiplicativeFunction,
    g: MultiplicativeFunction,
    c: int,
    n_max: int,
    t: int,
    table: Optional[FactorTable] = None,
) -> ConditionReport:
    if table is None or table.limit < n_max:
        table = build_factor_table(max(n_max, 2))
    fv = evaluate_range(f, n_max, table)
    gv = evaluate_range(g, n_max, table)

    dominates = Verdict(True)
    for n in range(2, n_max + 1):
        if fv[n] <= gv[n]:
            dominates = Verdict(False, (n, fv[n], gv[n]))
            break

    injective = Verdict(True)
    seen: dict[tuple[int, int], int] = {}
    for n in range(1, n_max + 1):
        pair = (fv[n], gv[n])
        if pair in seen:
            injective = Verdict(False, (seen[pair], n))
            break
        seen[pair] = n

    solutions = [n for n in range(2, n_max + 1) if fv[n] - gv[n] == c]
    equation = Verdict(True, (len(solutions),))

    smooth_f = _smooth_verdict(solutions, f, t, table)
    smooth_g = _smooth_verdict(solutions, g, t, table)

    return ConditionReport(
        n_max=n_max,
        t=t,
        dominates=dominates,
        injective=injective,
        equation=equation,
        growth_f=_growth_census(fv),
        growth_g=_growth_census(gv),
        smooth_f=smooth_f,
        smooth_g=smooth_g,
    )


def _smooth_verdict(
    solutions: list[int], func: MultiplicativeFunction, t: int, table: FactorTable
) -> Verdict:
    for n in solutions:
        for p, e in factorize(n, table).parts:
            v = func.prime_power_rule(p, e)
            if v > t:
                return Verdict(False, (n, p**e, v))
    return Verdict(True)


def _growth_census(values: list[int]) -> GrowthCensus:
    ordered = sorted(values[1:])  # drop index 0
    top = ordered[-1]
    best = 0.0
    best_x = 1
    samples = 0
    x = 1
    while x <= top:
        count = _count_le(ordered, x)
        ratio = count / x
        samples += 1
        if ratio > best:
            best = ratio
            best_x = x
        x *= 2
    return GrowthCensus(max_ratio=best, at_x=best_x, samples=samples)


def _count_le(ordered: list[int], x: int) -> int:
    lo, hi = 0, len(ordered)
    while lo < hi:
        mid = (lo + hi) // 2
        if ordered[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# solutions -> configuration


@dataclass(frozen=True)
class ConstructionDetail:
    """Per-solution split data and vertex multiplicities."""

    pairs: tuple[tuple[int, int, int, tuple[int, int], tuple[int, int]], ...]
    # (n, a, b, point, line)
    point_multiplicity: dict[tuple[int, int], int]
    line_multiplicity: dict[tuple[int, int], int]


def solutions_to_configuration(
    instance: DifferenceInstance,
    detail: bool = False,
    table: Optional[FactorTable] = None,
):
    """Build the incidence configuration carried by an instance's solutions.

    Each solution n is split over its prime-power components so that both
    halves keep f below sqrt(f(n) * t) <= t * sqrt(c); the halves become
    one point and one line that are incident by construction.  Duplicate
    vertices are merged, with multiplicities reported via detail=True.
    """
    f, g, c, t = instance.f, instance.g, instance.c, instance.t
    points: dict[tuple[int, int], int] = {}
    lines: dict[tuple[int, int], int] = {}
    pairs = []
    for n in instance.solutions:
        parts = factorize(n, table).parts
        f_parts = [f.prime_power_rule(p, e) for p, e in parts]
        oversized = [p**e for (p, e), v in zip(parts, f_parts) if v > t]
        if oversized:
            raise ValueError(
                f"solution {n} has prime-power components {oversized} with "
                f"f-values above t = {t}"
            )
        fn = 1
        for v in f_parts:
            fn *= v
        if fn > c * t:
            raise RuntimeError(f"f({n}) = {fn} > c*t = {c * t}; hypotheses violated")
        split = balanced_split(f_parts, t)
        a = b = 1
        for i in split.group_a:
            a *= parts[i][0] ** parts[i][1]
        for i in split.group_b:
            b *= parts[i][0] ** parts[i][1]
        point = (split.product_a, g.on_parts(parts[i] for i in split.group_a))
        line = (split.product_b, g.on_parts(parts[i] for i in split.group_b))
        for coord in (point[0], line[0]):
            if coord * coord > fn * t:
                raise RuntimeError(f"split bound broke at n = {n}; bug")
        if not is_incident(point, line, c):
            raise RuntimeError(f"construction lost incidence at n = {n}; bug")
        points[point] = points.get(point, 0) + 1
        lines[line] = lines.get(line, 0) + 1
        pairs.append((n, a, b, point, line))
    config = Configuration(c, tuple(points), tuple(lines))
    if detail:
        return config, ConstructionDetail(
            pairs=tuple(pairs), point_multiplicity=points, line_multiplicity=lines
        )
    return config


# ---------------------------------------------------------------------------
# user-defined rules (CLI surface)

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.FloorDiv, ast.Mod, ast.Pow)


def parse_rule_expression(text: str) -> "ast.Expression":
    """Validate a prime-power rule written in p and a.

    Grammar: integer literals, the names p and a, parentheses, unary
    minus, and the operators + - * // % **.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad rule expression {text!r}: {exc}") from exc
    for node in ast.walk(tree):
        if isinstance(node, (ast.Expression, ast.Load)):
            continue
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            continue
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            continue
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            continue
        if isinstance(node, ast.Name) and node.id in ("p", "a"):
            continue
        if isinstance(node, (ast.Add, ast.Sub, ast.Mult, ast.FloorDiv, ast.Mod, ast.Pow, ast.USub)):
            continue
        raise ValueError(
            f"rule expression {text!r} uses disallowed syntax ({ast.dump(node)})"
        )
    return tree


def function_from_rule(name: str, rule_text: str) -> MultiplicativeFunction:
    """Build a multiplicative function from a rule expression in p and a."""
    tree = parse_rule_expression(rule_text)
    code = compile(tree, filename=f"<rule {name}>", mode="eval")

    def rule(p: int, a: int) -> int:
        return eval(code, {"__builtins__": {}}, {"p": p, "a": a})

    return MultiplicativeFunction(str(name), rule)


def load_rule_file(path) -> list[MultiplicativeFunction]:
    """Read custom multiplicative functions from a JSON rule file.

    The file holds one {"name": ..., "rule": "<expression in p and a>"}
    object or a list of them.
    """
    doc = json.loads(Path(path).read_text())
    entries = doc if isinstance(doc, list) else [doc]
    out = []
    for entry in entries:
        if not isinstance(entry, dict) or "name" not in entry or "rule" not in entry:
            raise ValueError(f"rule entries in {path} need 'name' and 'rule' fields")
        out.append(function_from_rule(entry["name"], entry["rule"]))
    return out
