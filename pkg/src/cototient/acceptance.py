"""The release gate: every shipped claim, checked end to end.

Each criterion is a standalone check returning a CriterionResult; the CLI
`verify` subcommand and the test suite both run them.  Randomized
criteria take an explicit seed so failures replay exactly.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Optional

from .arith import IDENTITY, TOTIENT, build_factor_table, factorize, is_prime, prime_range
from .diffscan import DifferenceInstance, solutions_to_configuration
from .equation import goldbach_pairs, prime_power_solutions, solve, sweep_solutions
from .geometry import (
    find_cycle,
    incidence_graph,
    random_prime_configuration,
    verify_incidence_bound,
)
from .partition import balanced_split
from .scan import format_table, iter_solution_blocks, scan

DEFAULT_SEED = 1729

CRITERIA = {
    1: "solver matches brute-force sweep on [2, 2000]",
    2: "coprime configurations are forests (10^4 seeded samples)",
    3: "divisor-class decomposition bound on solution configurations",
    4: "balanced splits stay within sqrt(n*t) (10^5 seeded samples)",
    5: "scan [2, 1e5]: T >= G-1, two-prime bijection, dyadic slope <= 0.9",
    6: "per-solution identities on [2, 1e4]",
    7: "scan output independent of worker count",
}


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    seconds: float


class AcceptanceSuite:
    """Runs the acceptance criteria, sharing heavyweight state."""

    def __init__(self, workers: int = 8, seed: int = DEFAULT_SEED):
        self.workers = workers
        self.seed = seed
        self._sweep2000: Optional[dict[int, list[int]]] = None

    def sweep2000(self) -> dict[int, list[int]]:
        if self._sweep2000 is None:
            self._sweep2000 = sweep_solutions(2000)
        return self._sweep2000

    def run(self, indices: Optional[list[int]] = None) -> list[CriterionResult]:
        picked = sorted(indices) if indices else sorted(CRITERIA)
        return [getattr(self, f"criterion_{i}")() for i in picked]

    def _finish(self, index: int, passed: bool, detail: str, t0: float) -> CriterionResult:
        return CriterionResult(
            index=index,
            name=CRITERIA[index],
            passed=passed,
            detail=detail,
            seconds=time.perf_counter() - t0,
        )

    # -- 1 ------------------------------------------------------------

    def criterion_1(self) -> CriterionResult:
        t0 = time.perf_counter()
        reference = self.sweep2000()
        mismatches = []
        for c in range(2, 2001):
            got = solve(c)
            if got != reference[c]:
                mismatches.append((c, got, reference[c]))
        detail = f"{len(mismatches)} mismatches over c in [2, 2000]"
        if mismatches:
            detail += f"; first: {mismatches[0]}"
        return self._finish(1, not mismatches, detail, t0)

    # -- 2 ------------------------------------------------------------

    def criterion_2(self, count: int = 10_000) -> CriterionResult:
        t0 = time.perf_counter()
        rng = random.Random(self.seed + 2)
        table = build_factor_table(60 * 60 + 10_000)
        cycles = 0
        over_edges = 0
        total_edges = 0
        for _ in range(count):
            config = random_prime_configuration(rng, c_max=10_000, max_size=200, table=table)
            graph = incidence_graph(config)
            total_edges += len(graph.edges)
            if len(graph.edges) > graph.m + graph.n:
                over_edges += 1
            if find_cycle(graph) is not None:
                cycles += 1
        passed = cycles == 0 and over_edges == 0
        detail = (
            f"{count} configurations, {total_edges} incidences; "
            f"{cycles} cycles, {over_edges} edge-bound violations"
        )
        return self._finish(2, passed, detail, t0)

    # -- 3 ------------------------------------------------------------

    def criterion_3(self, count: int = 100) -> CriterionResult:
        t0 = time.perf_counter()
        rng = random.Random(self.seed + 3)
        bad = []
        checked = 0
        for _ in range(count):
            c = rng.randint(10, 5000)
            sols = solve(c)
            t = 1
            for n in sols:
                t = max(t, max((p**e for p, e in factorize(n).parts), default=1))
            instance = DifferenceInstance(IDENTITY, TOTIENT, c, tuple(sols), t)
            config = solutions_to_configuration(instance)
            report = verify_incidence_bound(config)
            checked += 1
            if not (
                report.classes_prime
                and report.class_count <= report.class_limit
                and report.edge_count <= report.bound
                and report.passed
            ):
                bad.append(c)
        detail = f"{checked} solution configurations; {len(bad)} failures"
        if bad:
            detail += f" at c = {bad[:5]}"
        return self._finish(3, not bad, detail, t0)

    # -- 4 ------------------------------------------------------------

    def criterion_4(self, count: int = 100_000) -> CriterionResult:
        t0 = time.perf_counter()
        rng = random.Random(self.seed + 4)
        violations = 0
        for _ in range(count):
            k = rng.randint(1, 12)
            t = rng.randint(1, 10_000)
            values = [rng.randint(1, t) for _ in range(k)]
            split = balanced_split(values, t)
            n = split.product_a * split.product_b
            worse = max(split.product_a, split.product_b)
            if worse * worse > n * t:
                violations += 1
        detail = f"{count} multisets (k <= 12, values <= t <= 10^4); {violations} violations"
        return self._finish(4, violations == 0, detail, t0)

    # -- 5 ------------------------------------------------------------

    def criterion_5(self, c_to: int = 100_000) -> CriterionResult:
        t0 = time.perf_counter()
        rows, summary = scan(2, c_to, workers=self.workers)
        # residual >= -1, and the -1 slack can only come from a p + p
        # representation of c + 1
        lower_bound_bad = [
            r.c
            for r in rows
            if r.residual < -1
            or (r.residual == -1 and not ((r.c + 1) % 2 == 0 and is_prime((r.c + 1) // 2)))
        ]

        # squarefree two-prime solutions are exactly the Goldbach products
        bijection_bad = []
        expected = {
            c: sorted(p * q for p, q in goldbach_pairs(c + 1) if p < q)
            for c in range(2, 2001)
        }
        found: dict[int, list[int]] = {c: [] for c in range(2, 2001)}
        for block in iter_solution_blocks(2, 2000):
            mask = (block.omega == 2) & block.squarefree
            for c, n in zip(block.c[mask].tolist(), block.n[mask].tolist()):
                found[c].append(n)
        for c in range(2, 2001):
            if found[c] != expected[c]:
                bijection_bad.append(c)

        slope = summary.slope
        slope_ok = slope is not None and slope <= 0.9
        passed = not lower_bound_bad and not bijection_bad and slope_ok
        detail = (
            f"{len(rows)} rows; residual >= -1 fails at {len(lower_bound_bad)} c; "
            f"bijection fails at {len(bijection_bad)} c; slope {slope:.4f} "
            f"over {summary.slope_points} dyadic blocks"
        )
        return self._finish(5, passed, detail, t0)

    # -- 6 ------------------------------------------------------------

    def criterion_6(self, c_to: int = 10_000) -> CriterionResult:
        t0 = time.perf_counter()
        table = build_factor_table(c_to)
        phi = [0, 1] + [table.totient(A) for A in range(2, c_to)]
        mult_one: list[list[int]] = [[] for _ in range(c_to)]
        for q in prime_range(c_to - 1).tolist():
            for m in range(q, c_to, q):
                if (m // q) % q:
                    mult_one[m].append(q)

        cofactor_bad = window_bad = primal_bad = identity_bad = 0
        prime_power_found: dict[int, list[int]] = {}
        solutions = 0
        for block in iter_solution_blocks(2, c_to):
            cs = block.c.tolist()
            ns = block.n.tolist()
            kinds = block.kind.tolist()
            xs = block.x.tolist()
            ys = block.y.tolist()
            oms = block.omega.tolist()
            solutions += len(cs)
            for c, n, kind, x, y, om in zip(cs, ns, kinds, xs, ys, oms):
                if c % 2 == 0 and not (c < n <= 2 * c and (n != 2 * c or n & (n - 1) == 0)):
                    window_bad += 1
                if kind == 1:
                    if om == 1:
                        prime_power_found.setdefault(c, []).append(n)
                    continue  # powerful n: no multiplicity-one primes
                A, p = x, y
                m1 = mult_one[A] + [p]
                for q in m1:
                    if n // q >= c:
                        cofactor_bad += 1
                if om >= 3 and len(m1) >= 2:
                    phi_n = phi[A] * (p - 1)
                    for i in range(len(m1)):
                        for j in range(i + 1, len(m1)):
                            u, v = m1[i], m1[j]
                            B = n // (u * v)
                            phi_b = phi_n // ((u - 1) * (v - 1))
                            D = B - phi_b
                            if (D * u + phi_b) * (D * v + phi_b) != D * c + B * phi_b:
                                identity_bad += 1
        for c in range(2, c_to + 1):
            if prime_power_found.get(c, []) != prime_power_solutions(c):
                primal_bad += 1
        passed = not (cofactor_bad or window_bad or primal_bad or identity_bad)
        detail = (
            f"{solutions} solutions over c in [2, {c_to}]; "
            f"cofactor-bound {cofactor_bad}, even-window {window_bad}, "
            f"prime-power {primal_bad}, product-identity {identity_bad} failures"
        )
        return self._finish(6, passed, detail, t0)

    # -- 7 ------------------------------------------------------------

    def criterion_7(self, c_to: int = 10_000) -> CriterionResult:
        t0 = time.perf_counter()
        rows_serial, _ = scan(2, c_to, workers=1, block_size=1024)
        rows_parallel, _ = scan(2, c_to, workers=8, block_size=1024)
        same = format_table(rows_serial) == format_table(rows_parallel)
        detail = f"tables for [2, {c_to}] with 1 and 8 workers are {'byte-identical' if same else 'DIFFERENT'}"
        return self._finish(7, same, detail, t0)


def run_acceptance(
    workers: int = 8, seed: int = DEFAULT_SEED, indices: Optional[list[int]] = None
) -> list[CriterionResult]:
    return AcceptanceSuite(workers=workers, seed=seed).run(indices)
