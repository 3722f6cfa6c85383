"""Balanced two-way splits of a factor multiset.

Given values x_1..x_k, each at most t, with product n, there is always a
split into two groups whose products a and b both satisfy
a, b <= sqrt(n) * sqrt(t): start from the most balanced split and observe
that moving one factor across would otherwise improve it.  Since a*b = n
is fixed, "most balanced" is the same as "smallest larger product", so the
search and every comparison stay in exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

EXACT_SEARCH_LIMIT = 24  # beyond this, fall back to the greedy split


@dataclass(frozen=True)
class SplitResult:
    """A two-group split of the input indices.

    group_a and group_b partition range(k); product_a * product_b equals
    the product of all inputs, and max(product_a, product_b) stays within
    sqrt(n * t) for the t the split was built with.
    """

    group_a: tuple[int, ...]
    group_b: tuple[int, ...]
    product_a: int
    product_b: int


def balanced_split(values: Sequence[int], t: int) -> SplitResult:
    """Split values (each in [1, t]) into two groups of bounded product.

    Exact mode (k <= 24) returns the most balanced split, i.e. the one
    minimizing the larger product, with index 0 always in group_a and ties
    broken toward the lexicographically smallest group_a.  Larger k uses a
    greedy descending assignment, which still guarantees the bound.
    """
    vals = [int(v) for v in values]
    if not vals:
        raise ValueError("cannot split an empty multiset")
    if t < 1:
        raise ValueError(f"bound t must be >= 1, got {t}")
    for v in vals:
        if v < 1:
            raise ValueError(f"values must be positive, got {v}")
        if v > t:
            raise ValueError(f"value {v} exceeds the declared bound t = {t}")
    n = prod(vals)

    if len(vals) <= EXACT_SEARCH_LIMIT:
        result = _exact_split(vals, n)
    else:
        result = _greedy_split(vals, n)

    worse = max(result.product_a, result.product_b)
    if worse * worse > n * t:
        raise RuntimeError(
            f"split bound violated: {worse}^2 > {n} * {t}; this is a bug"
        )
    return result


def _exact_split(vals: list[int], n: int) -> SplitResult:
    """Minimize the larger product over all splits with index 0 in group_a.

    Subsets of indices 1..k-1 are walked in Gray-code order so the running
    product changes by one exact multiply or divide per step.
    """
    k = len(vals)
    best_mask = 0
    best_worse = max(vals[0], n // vals[0])
    best_tuple: tuple[int, ...] | None = None  # materialized only on ties
    prod_a = vals[0]
    gray = 0
    for i in range(1, 1 << (k - 1)):
        flip = (i & -i).bit_length() - 1  # bit toggled by this Gray step
        gray ^= 1 << flip
        if gray & (1 << flip):
            prod_a *= vals[flip + 1]
        else:
            prod_a //= vals[flip + 1]
        worse = max(prod_a, n // prod_a)
        if worse > best_worse:
            continue
        if worse < best_worse:
            best_worse = worse
            best_mask = gray
            best_tuple = None
            continue
        # tie: prefer the lexicographically smaller group_a index set
        cand = _mask_to_group(gray, k)
        if best_tuple is None:
            best_tuple = _mask_to_group(best_mask, k)
        if cand < best_tuple:
            best_mask = gray
            best_tuple = cand
    group_a = _mask_to_group(best_mask, k)
    group_b = tuple(i for i in range(1, k) if not best_mask & (1 << (i - 1)))
    pa = prod(vals[i] for i in group_a)
    return SplitResult(group_a, group_b, pa, n // pa)


def _mask_to_group(mask: int, k: int) -> tuple[int, ...]:
    return (0,) + tuple(i for i in range(1, k) if mask & (1 << (i - 1)))


def _greedy_split(vals: list[int], n: int) -> SplitResult:
    order = sorted(range(len(vals)), key=lambda i: (-vals[i], i))
    ga: list[int] = []
    gb: list[int] = []
    pa = pb = 1
    for i in order:
        if pa <= pb:
            ga.append(i)
            pa *= vals[i]
        else:
            gb.append(i)
            pb *= vals[i]
    ga.sort()
    gb.sort()
    return SplitResult(tuple(ga), tuple(gb), pa, pb)
