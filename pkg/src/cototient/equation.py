"""Exact solutions of n - phi(n) = c.

Write psi(n) = n - phi(n).  For c >= 2 every solution is composite, and a
composite n with smallest prime p satisfies psi(n) >= n/p >= sqrt(n), so
all solutions sit below c^2: a finite sweep is a complete reference
answer.  The structured solver avoids the sweep: any n that is not
powerful has a prime p of multiplicity one, giving n = A*p with p not
dividing A and

    psi(A*p) = A*p - phi(A)*(p - 1) = (A - phi(A))*p + phi(A) = c,

which pins p once A <= c - 1 is chosen; the remaining, powerful n (every
exponent >= 2) are enumerated directly as a^2 * b^3 with b squarefree.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Optional

import numpy as np

from .arith import (
    FactorTable,
    Factorization,
    ResourceLimitError,
    build_factor_table,
    cototient,
    factorize,
    is_prime,
    prime_mask,
    squarefree_range,
    totient_range,
)

SWEEP_C_MAX = 3000  # sweep sieves phi over n <= c_max^2


@dataclass(frozen=True)
class SolutionRecord:
    """One solution n of psi(n) = c together with its structure."""

    c: int
    n: int
    factorization: Factorization
    omega: int
    squarefree: bool

    def __post_init__(self) -> None:
        if self.n - self.factorization.totient() != self.c:
            raise ValueError(f"{self.n} is not a solution for c = {self.c}")
        if self.omega != self.factorization.omega:
            raise ValueError("omega does not match the factorization")


def solution_record(c: int, n: int, table: Optional[FactorTable] = None) -> SolutionRecord:
    fac = factorize(n, table)
    return SolutionRecord(c=c, n=n, factorization=fac, omega=fac.omega, squarefree=fac.squarefree)


def sweep_solutions(c_max: int, c_min: int = 2) -> dict[int, list[int]]:
    """Brute-force reference: all solutions for every c in [c_min, c_max].

    Sieves phi over n <= c_max^2, which covers every solution (composite
    solutions obey n <= c^2 and primes solve only c = 1).
    """
    if not 2 <= c_min <= c_max:
        raise ValueError(f"need 2 <= c_min <= c_max, got [{c_min}, {c_max}]")
    if c_max > SWEEP_C_MAX:
        raise ResourceLimitError(
            f"sweep bound {c_max} exceeds {SWEEP_C_MAX}; the phi sieve over "
            f"n <= {c_max}^2 would not fit the desk budget"
        )
    limit = c_max * c_max
    ct = -totient_range(limit)
    ct += np.arange(limit + 1, dtype=np.int64)
    hits = np.flatnonzero((ct >= c_min) & (ct <= c_max))
    out: dict[int, list[int]] = {c: [] for c in range(c_min, c_max + 1)}
    for n in hits.tolist():
        out[int(ct[n])].append(n)
    return out


def solve(c: int) -> list[int]:
    """All n with n - phi(n) = c, in increasing order.

    c = 1 is rejected: every prime solves it.
    """
    if c < 2:
        raise ValueError(f"c must be >= 2 (every prime solves c = 1), got {c}")
    sols = set()
    if c >= 3:
        phi = totient_range(c - 1).tolist()
        for A in range(2, c):
            phi_a = phi[A]
            d = A - phi_a
            r = c - phi_a
            if r % d:
                continue
            p = r // d
            if p < 2 or A % p == 0 or not is_prime(p):
                continue
            # p has multiplicity one in A*p, so psi(A*p) = c exactly
            if A * p - phi_a * (p - 1) != c:
                raise RuntimeError(f"solver identity broke at A={A}, p={p}")
            sols.add(A * p)
    psi_pow, n_pow, _, _, _ = powerful_cototients(_cap_for(c))
    lo, hi = np.searchsorted(psi_pow, [c, c + 1])
    sols.update(int(n) for n in n_pow[lo:hi])
    return sorted(sols)


def _cap_for(c: int) -> int:
    cap = 64
    while cap < c:
        cap *= 2
    return cap


@lru_cache(maxsize=6)
def powerful_cototients(
    c_cap: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Powerful n <= c_cap^2 with psi(n) <= c_cap, sorted by (psi, n).

    Returns parallel arrays (psi, n, a, b, omega) where n = a^2 * b^3 with
    b squarefree.  psi(n) >= n / spf(n) prunes almost every candidate
    before its totient is computed.
    """
    limit = c_cap * c_cap
    table = build_factor_table(c_cap)
    spf = table.smallest_factor
    sqfree = squarefree_range(int(round(limit ** (1 / 3))) + 2)
    rows = []
    b = 1
    while b * b * b <= limit:
        if sqfree[b]:
            b3 = b * b * b
            spf_b = int(spf[b]) if b > 1 else 0
            for a in range(1, isqrt(limit // b3) + 1):
                n = a * a * b3
                if n == 1:
                    continue
                spf_a = int(spf[a]) if a > 1 else 0
                low = min(x for x in (spf_a, spf_b) if x)
                if n // low > c_cap:
                    continue
                exps: Counter[int] = Counter()
                for p, e in table.factor_parts(a):
                    exps[p] += 2 * e
                for p, e in table.factor_parts(b):
                    exps[p] += 3 * e
                phi = 1
                for p, e in exps.items():
                    phi *= p ** (e - 1) * (p - 1)
                psi = n - phi
                if psi <= c_cap:
                    rows.append((psi, n, a, b, len(exps)))
        b += 1
    rows.sort()
    if not rows:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, empty, empty, empty
    arr = np.array(rows, dtype=np.int64)
    return tuple(arr[:, k].copy() for k in range(5))  # type: ignore[return-value]


def prime_power_solutions(c: int) -> list[int]:
    """Solutions of the form n = p^k.

    psi(p^k) = p^(k-1), so a prime-power solution exists iff c itself is a
    prime power p^j (j >= 1), and then n = p * c is the only one.
    """
    if c < 2:
        raise ValueError(f"c must be >= 2, got {c}")
    fac = factorize(c)
    if fac.omega != 1:
        return []
    p = fac.parts[0][0]
    return [p * c]


def goldbach_count(k: int) -> int:
    """Number of ways k = p + q with primes p <= q."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    mask = prime_mask(k)
    count = 0
    for p in range(2, k // 2 + 1):
        if mask[p] and mask[k - p]:
            count += 1
    return count


def goldbach_pairs(k: int) -> list[tuple[int, int]]:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    mask = prime_mask(k)
    return [(p, k - p) for p in range(2, k // 2 + 1) if mask[p] and mask[k - p]]


def solutions_with_cofactor(B: int, c: int) -> list[int]:
    """Solutions of the form n = B*p*q with primes p < q not dividing B.

    With D = B - phi(B), the equation B*p*q - phi(B)(p-1)(q-1) = c is the
    same as (D*p + phi(B)) * (D*q + phi(B)) = D*c + B*phi(B), so p and q
    are read off the divisor pairs of the right-hand side.
    """
    if B < 2:
        raise ValueError(f"B must be >= 2 (B = 1 degenerates to p + q = c + 1), got {B}")
    if c < 2:
        raise ValueError(f"c must be >= 2, got {c}")
    fac = factorize(B)
    phi_b = fac.totient()
    D = B - phi_b
    M = D * c + B * phi_b
    out = []
    for u in _divisor_pairs(M):
        v = M // u
        if (u - phi_b) % D or (v - phi_b) % D:
            continue
        p = (u - phi_b) // D
        q = (v - phi_b) // D
        if p < 2 or q <= p:
            continue
        if B % p == 0 or B % q == 0:
            continue
        if not (is_prime(p) and is_prime(q)):
            continue
        n = B * p * q
        if cototient(n) == c:
            out.append(n)
    return sorted(out)


def _divisor_pairs(M: int) -> list[int]:
    """Divisors u of M with u <= M/u, ascending."""
    return [u for u in range(1, isqrt(M) + 1) if M % u == 0]


def classify(records: list[SolutionRecord]) -> tuple[dict[int, int], dict[int, int]]:
    """Histogram of omega over the records, plus its squarefree refinement.

    The second map gives, for each k, how many solutions are products of
    exactly k distinct primes.
    """
    hist = Counter(r.omega for r in records)
    squarefree = Counter(r.omega for r in records if r.squarefree)
    return dict(sorted(hist.items())), dict(sorted(squarefree.items()))
