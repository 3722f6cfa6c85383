"""Integer point-line configurations sharing one free term.

Points are lattice points (A, a); a line with parameters (B, b) is the
locus B*x - b*y = c, so the point lies on the line exactly when
A*B - a*b = c.  When every coordinate is coprime to c the bipartite
incidence graph is a forest; in general, edges split into divisor-indexed
classes whose reduced configurations are coprime again, which caps the
incidence count at (m + n) * tau(c)^3.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from math import gcd
from pathlib import Path
from typing import Optional

import numpy as np

from .arith import FactorTable, divisor_count, divisors

# coordinate products beyond this go through exact Python ints, not int64
_INT64_SAFE = 2**62

Vertex = tuple[str, int]  # ("point", i) or ("line", j)


@dataclass(frozen=True)
class Configuration:
    """Distinct integer points and lines with a shared free term c >= 1."""

    c: int
    points: tuple[tuple[int, int], ...]
    lines: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.c < 1:
            raise ValueError(f"free term must be >= 1, got {self.c}")
        points = tuple((int(A), int(a)) for A, a in self.points)
        lines = tuple((int(B), int(b)) for B, b in self.lines)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "lines", lines)
        for x, y in (*points, *lines):
            if x < 1 or y < 1:
                raise ValueError(f"coordinates must be >= 1, got ({x}, {y})")
        if len(set(points)) != len(points):
            raise ValueError("duplicate points")
        if len(set(lines)) != len(lines):
            raise ValueError("duplicate lines")


@dataclass(frozen=True)
class IncidenceGraph:
    """Bipartite incidence structure: edge (i, j) iff point i lies on line j."""

    m: int
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate edges")
        for i, j in self.edges:
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range")


def is_incident(point: tuple[int, int], line: tuple[int, int], c: int) -> bool:
    A, a = point
    B, b = line
    return A * B - a * b == c


def incidence_graph(config: Configuration) -> IncidenceGraph:
    """All incident (point, line) pairs, plus a no-4-cycle consistency check.

    Two distinct lines B*x - b*y = c (c >= 1) are never the same geometric
    line, so they share at most one point; a 4-cycle would contradict that.
    """
    m, n = len(config.points), len(config.lines)
    if m == 0 or n == 0:
        return IncidenceGraph(m, n, ())
    max_AB = max(p[0] for p in config.points) * max(l[0] for l in config.lines)
    max_ab = max(p[1] for p in config.points) * max(l[1] for l in config.lines)
    if max_AB < _INT64_SAFE and max_ab < _INT64_SAFE:
        A = np.array([p[0] for p in config.points], dtype=np.int64)
        a = np.array([p[1] for p in config.points], dtype=np.int64)
        B = np.array([l[0] for l in config.lines], dtype=np.int64)
        b = np.array([l[1] for l in config.lines], dtype=np.int64)
        hit = A[:, None] * B[None, :] - a[:, None] * b[None, :] == config.c
        edges = tuple((int(i), int(j)) for i, j in np.argwhere(hit))
    else:
        edges = tuple(
            (i, j)
            for i, (Ai, ai) in enumerate(config.points)
            for j, (Bj, bj) in enumerate(config.lines)
            if Ai * Bj - ai * bj == config.c
        )
    _reject_four_cycles(edges)
    return IncidenceGraph(m, n, edges)


def _reject_four_cycles(edges: tuple[tuple[int, int], ...]) -> None:
    by_line: dict[int, list[int]] = {}
    for i, j in edges:
        by_line.setdefault(j, []).append(i)
    seen: set[tuple[int, int]] = set()
    for pts in by_line.values():
        pts.sort()
        for x in range(len(pts)):
            for y in range(x + 1, len(pts)):
                pair = (pts[x], pts[y])
                if pair in seen:
                    raise RuntimeError(
                        f"points {pair} share two lines; 4-cycles are impossible "
                        "for distinct points and lines"
                    )
                seen.add(pair)


def is_prime_configuration(config: Configuration) -> bool:
    """True iff every coordinate of every point and line is coprime to c."""
    c = config.c
    return all(
        gcd(x, c) == 1 and gcd(y, c) == 1 for x, y in (*config.points, *config.lines)
    )


def find_cycle(graph: IncidenceGraph) -> Optional[list[Vertex]]:
    """Return some cycle as an alternating point/line vertex list, or None.

    None certifies the graph is a forest, hence has fewer edges than
    vertices in every component.
    """
    m = graph.m
    adj: dict[int, list[int]] = {}
    for i, j in graph.edges:
        adj.setdefault(i, []).append(m + j)
        adj.setdefault(m + j, []).append(i)
    parent: dict[int, Optional[int]] = {}
    for start in sorted(adj):
        if start in parent:
            continue
        parent[start] = None
        stack: list[tuple[int, int]] = [(start, 0)]
        while stack:
            v, idx = stack[-1]
            if idx >= len(adj[v]):
                stack.pop()
                continue
            stack[-1] = (v, idx + 1)
            w = adj[v][idx]
            if w == parent[v]:
                continue
            if w in parent:
                if any(s[0] == w for s in stack):  # back edge to an ancestor
                    cycle = [v]
                    x = v
                    while x != w:
                        x = parent[x]  # type: ignore[assignment]
                        cycle.append(x)
                    return [_decode(x, m) for x in cycle]
                continue
            parent[w] = v
            stack.append((w, 0))
    return None


def _decode(v: int, m: int) -> Vertex:
    return ("point", v) if v < m else ("line", v - m)


@dataclass(frozen=True)
class DivisorClass:
    """One reduced sub-configuration of the divisor decomposition.

    Indexed by divisors l = l1*l2 = l3*l4 of c; holds the reduced points
    (A/l1, a/l3), reduced lines (B/l2, b/l4), the reduced free term c/l,
    and the indices of the original edges it accounts for.
    """

    l: int
    l1: int
    l2: int
    l3: int
    l4: int
    reduced_c: int
    reduced_points: tuple[tuple[int, int], ...]
    reduced_lines: tuple[tuple[int, int], ...]
    class_edges: tuple[int, ...]

    def reduced_configuration(self) -> Configuration:
        return Configuration(self.reduced_c, self.reduced_points, self.reduced_lines)


def decompose(config: Configuration, graph: Optional[IncidenceGraph] = None) -> list[DivisorClass]:
    """Partition incidences into divisor classes with coprime reductions.

    Each edge goes to exactly one class via l = gcd(A*B, c), l1 = gcd(A, l),
    l2 = l/l1, l3 = gcd(a, l), l4 = l/l3.  Since A*B = a*b + c, l also
    divides a*b, which makes l2 | B and l4 | b; stripping the shared
    divisors leaves every reduced coordinate coprime to c/l.
    """
    if graph is None:
        graph = incidence_graph(config)
    c = config.c
    classes: dict[tuple[int, int, int, int, int], list[int]] = {}
    for idx, (i, j) in enumerate(graph.edges):
        A, a = config.points[i]
        B, b = config.lines[j]
        l = gcd(A * B, c)
        l1 = gcd(A, l)
        l2 = l // l1
        l3 = gcd(a, l)
        l4 = l // l3
        if B % l2 or b % l4:
            raise RuntimeError(f"class divisors do not divide edge ({i}, {j}); bug")
        classes.setdefault((l, l1, l2, l3, l4), []).append(idx)
    out = []
    for key in sorted(classes):
        l, l1, l2, l3, l4 = key
        edge_ids = classes[key]
        pts = dict.fromkeys(
            (config.points[graph.edges[e][0]][0] // l1, config.points[graph.edges[e][0]][1] // l3)
            for e in edge_ids
        )
        lns = dict.fromkeys(
            (config.lines[graph.edges[e][1]][0] // l2, config.lines[graph.edges[e][1]][1] // l4)
            for e in edge_ids
        )
        out.append(
            DivisorClass(
                l=l,
                l1=l1,
                l2=l2,
                l3=l3,
                l4=l4,
                reduced_c=c // l,
                reduced_points=tuple(pts),
                reduced_lines=tuple(lns),
                class_edges=tuple(edge_ids),
            )
        )
    return out


@dataclass(frozen=True)
class IncidenceBoundReport:
    edge_count: int
    m: int
    n: int
    tau_c: int
    bound: int
    class_count: int
    class_limit: int
    per_class_sizes: tuple[int, ...]
    classes_prime: bool
    classes_forest: bool
    classes_within_vertex_bound: bool
    passed: bool


def verify_incidence_bound(config: Configuration) -> IncidenceBoundReport:
    """Check |E| <= (m+n) * tau(c)^3 together with the per-class structure."""
    graph = incidence_graph(config)
    classes = decompose(config, graph)
    m, n = graph.m, graph.n
    tau_c = divisor_count(config.c)
    bound = (m + n) * tau_c**3
    sizes = tuple(len(cl.class_edges) for cl in classes)
    classes_prime = all(is_prime_configuration(cl.reduced_configuration()) for cl in classes)
    classes_forest = all(
        find_cycle(incidence_graph(cl.reduced_configuration())) is None for cl in classes
    )
    within = all(s <= m + n for s in sizes)
    passed = len(graph.edges) <= bound and classes_forest and within
    return IncidenceBoundReport(
        edge_count=len(graph.edges),
        m=m,
        n=n,
        tau_c=tau_c,
        bound=bound,
        class_count=len(classes),
        class_limit=tau_c**3,
        per_class_sizes=sizes,
        classes_prime=classes_prime,
        classes_forest=classes_forest,
        classes_within_vertex_bound=within,
        passed=passed,
    )


def random_prime_configuration(
    rng: random.Random,
    c_max: int = 10_000,
    max_size: int = 200,
    coord_max: int = 60,
    table: Optional[FactorTable] = None,
) -> Configuration:
    """Sample a coprime configuration that is forced to carry incidences.

    Uniform coordinates almost never produce an incidence, so instead we
    sample a, b coprime to c and split a*b + c = A * B over a random
    divisor; gcd(a*b + c, c) = gcd(a*b, c) = 1 makes every such A, B
    automatically coprime to c.
    """
    c = rng.randint(2, c_max)
    n_points = rng.randint(1, max_size)
    n_lines = rng.randint(1, max_size)
    points: dict[tuple[int, int], None] = {}
    lines: dict[tuple[int, int], None] = {}
    attempts = 0
    limit = 30 * (n_points + n_lines) + 100
    while (len(points) < n_points or len(lines) < n_lines) and attempts < limit:
        attempts += 1
        a = rng.randint(1, coord_max)
        b = rng.randint(1, coord_max)
        if gcd(a, c) != 1 or gcd(b, c) != 1:
            continue
        M = a * b + c
        A = rng.choice(divisors(M, table))
        B = M // A
        if len(points) < n_points:
            points.setdefault((A, a), None)
        if len(lines) < n_lines:
            lines.setdefault((B, b), None)
    return Configuration(c, tuple(points), tuple(lines))


# ---------------------------------------------------------------------------
# configuration files


def configuration_to_json(config: Configuration) -> str:
    doc = {
        "c": config.c,
        "points": [list(p) for p in config.points],
        "lines": [list(l) for l in config.lines],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def configuration_from_json(text: str) -> Configuration:
    doc = json.loads(text)
    try:
        c = doc["c"]
        points = [(int(A), int(a)) for A, a in doc["points"]]
        lines = [(int(B), int(b)) for B, b in doc["lines"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed configuration document: {exc}") from exc
    return Configuration(c, tuple(points), tuple(lines))


def load_configuration(path: str | Path) -> Configuration:
    return configuration_from_json(Path(path).read_text())


def save_configuration(config: Configuration, path: str | Path) -> None:
    Path(path).write_text(configuration_to_json(config))
