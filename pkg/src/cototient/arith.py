"""Exact integer arithmetic underpinning the solver stack.

Primality and factorization (trial division, or a smallest-prime-factor
table for bulk work), divisor enumeration, Euler's totient phi and the
cototient n - phi(n), vectorized sieves over a range, and multiplicative
functions defined by a rule on prime powers.

Everything is exact.  Scalar arithmetic uses Python integers (no
wraparound at any size); the numpy-backed sieves use int64 and are kept
far from that limit by the resource caps.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterable, Optional

import numpy as np

FACTOR_TABLE_CAP = 2**31


class ResourceLimitError(ValueError):
    """Raised when a request exceeds a configured resource cap."""


# ---------------------------------------------------------------------------
# primality and factorization


def is_prime(n: int) -> bool:
    """Deterministic trial division (6k+-1).  Intended for n up to ~10^12."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    d = 5
    while d * d <= n:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


@dataclass(frozen=True)
class Factorization:
    """Factorization of a positive integer into (prime, exponent) parts.

    Parts carry strictly increasing primes and exponents >= 1, and their
    product is n; n == 1 has no parts.
    """

    n: int
    parts: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"factorization needs n >= 1, got {self.n}")
        prod = 1
        last = 1
        for p, e in self.parts:
            if p <= last or e < 1:
                raise ValueError(f"malformed parts for {self.n}: {self.parts}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"parts {self.parts} do not multiply to {self.n}")

    @property
    def omega(self) -> int:
        """Number of distinct primes (= number of prime-power components)."""
        return len(self.parts)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.parts)

    def totient(self) -> int:
        phi = 1
        for p, e in self.parts:
            phi *= p ** (e - 1) * (p - 1)
        return phi


@dataclass(frozen=True)
class FactorTable:
    """Smallest-prime-factor table for 2..limit, immutable once built.

    Safe to share across worker processes; all lookups are reads.
    """

    limit: int
    smallest_factor: np.ndarray

    def spf(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise ValueError(f"{n} outside table range 2..{self.limit}")
        return int(self.smallest_factor[n])

    def factor_parts(self, n: int) -> list[tuple[int, int]]:
        spf = self.smallest_factor
        parts = []
        m = n
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            parts.append((p, e))
        return parts

    def totient(self, n: int) -> int:
        spf = self.smallest_factor
        phi = 1
        m = n
        while m > 1:
            p = int(spf[m])
            m //= p
            f = p - 1
            while m % p == 0:
                m //= p
                f *= p
            phi *= f
        return phi


def build_factor_table(limit: int, cap: int = FACTOR_TABLE_CAP) -> FactorTable:
    """Sieve smallest prime factors up to limit (inclusive)."""
    if limit < 2:
        raise ValueError(f"table limit must be >= 2, got {limit}")
    if limit > cap:
        raise ResourceLimitError(f"table limit {limit} exceeds cap {cap}")
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    rest = np.flatnonzero(spf[2:] == 0) + 2  # primes keep themselves
    spf[rest] = rest
    return FactorTable(limit=limit, smallest_factor=spf)


def factorize(n: int, table: Optional[FactorTable] = None) -> Factorization:
    """Factor a positive integer; uses the table when it covers n."""
    if n < 1:
        raise ValueError(f"cannot factor {n}; need a positive integer")
    if n == 1:
        return Factorization(1, ())
    if table is not None and n <= table.limit:
        return Factorization(n, tuple(table.factor_parts(n)))
    parts = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            parts.append((p, e))
    d = 5
    while d * d <= m:
        for p in (d, d + 2):
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                parts.append((p, e))
        d += 6
    if m > 1:
        parts.append((m, 1))
    return Factorization(n, tuple(parts))


def euler_phi(n: int, table: Optional[FactorTable] = None) -> int:
    """phi(n) via the product formula over n's prime factorization."""
    if n < 1:
        raise ValueError(f"phi needs n >= 1, got {n}")
    if n == 1:
        return 1
    if table is not None and n <= table.limit:
        return table.totient(n)
    return factorize(n).totient()


def cototient(n: int, table: Optional[FactorTable] = None) -> int:
    """n - phi(n).  Zero only at n = 1, one exactly at primes."""
    return n - euler_phi(n, table)


def divisors(n: int, table: Optional[FactorTable] = None) -> list[int]:
    """All divisors of n in ascending order."""
    fac = factorize(n, table)
    divs = [1]
    for p, e in fac.parts:
        pk = 1
        block = []
        for _ in range(e):
            pk *= p
            block.extend(d * pk for d in divs)
        divs.extend(block)
    divs.sort()
    return divs


def divisor_count(n: int, table: Optional[FactorTable] = None) -> int:
    tau = 1
    for _, e in factorize(n, table).parts:
        tau *= e + 1
    return tau


# ---------------------------------------------------------------------------
# multiplicative functions


@dataclass(frozen=True)
class MultiplicativeFunction:
    """A multiplicative function given by its rule on prime powers.

    The value at n is the product of prime_power_rule(p, e) over the parts
    of n's factorization; the value at 1 is the empty product 1.  Rules
    must return positive integers.
    """

    name: str
    prime_power_rule: Callable[[int, int], int]

    def on_parts(self, parts: Iterable[tuple[int, int]]) -> int:
        value = 1
        for p, e in parts:
            r = self.prime_power_rule(p, e)
            if not isinstance(r, int) or r < 1:
                raise ValueError(
                    f"rule of {self.name!r} returned {r!r} at ({p}, {e}); "
                    "rules must yield positive integers"
                )
            value *= r
        return value

    def __call__(self, n: int, table: Optional[FactorTable] = None) -> int:
        return self.on_parts(factorize(n, table).parts)


def _identity_rule(p: int, e: int) -> int:
    return p**e


def _totient_rule(p: int, e: int) -> int:
    return p ** (e - 1) * (p - 1)


def _sigma_rule(p: int, e: int) -> int:
    return (p ** (e + 1) - 1) // (p - 1)


def _tau_rule(p: int, e: int) -> int:
    return e + 1


IDENTITY = MultiplicativeFunction("id", _identity_rule)
TOTIENT = MultiplicativeFunction("phi", _totient_rule)
SIGMA = MultiplicativeFunction("sigma", _sigma_rule)
TAU = MultiplicativeFunction("tau", _tau_rule)

BUILTIN_FUNCTIONS = {f.name: f for f in (IDENTITY, TOTIENT, SIGMA, TAU)}


# ---------------------------------------------------------------------------
# vectorized sieves over 0..limit


def prime_mask(limit: int) -> np.ndarray:
    """Boolean array, mask[k] == True iff k is prime, for 0 <= k <= limit."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def prime_range(limit: int) -> np.ndarray:
    """Primes up to limit as an int64 array."""
    return np.flatnonzero(prime_mask(limit)).astype(np.int64)


def totient_range(limit: int) -> np.ndarray:
    """phi(k) for 0 <= k <= limit (phi(0) reported as 0)."""
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in prime_range(limit):
        phi[p::p] -= phi[p::p] // p
    return phi


def omega_range(limit: int) -> np.ndarray:
    """Number of distinct prime factors for 0 <= k <= limit."""
    omega = np.zeros(limit + 1, dtype=np.int8)
    for p in prime_range(limit):
        omega[p::p] += 1
    return omega


def squarefree_range(limit: int) -> np.ndarray:
    """Boolean array marking squarefree k for 0 <= k <= limit (1 included)."""
    sq = np.ones(limit + 1, dtype=bool)
    sq[0] = False
    if limit >= 4:
        for p in prime_range(isqrt(limit)):
            sq[p * p :: p * p] = False
    return sq
