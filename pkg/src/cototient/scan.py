"""Range scans of T(c) = #{n : n - phi(n) = c} against G(c+1).

Instead of solving each c on its own, a scan enumerates every valid
(A, p) pair at once: for fixed A the admissible primes p form a
contiguous run determined by (A - phi(A)) * p + phi(A) landing in the
block, so whole blocks of c are produced with vectorized numpy passes.
Powerful solutions come from a precomputed table.  Blocks are disjoint in
c, which makes the scan embarrassingly parallel and its output
independent of the worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from multiprocessing import get_context
from typing import Iterator, Optional

import numpy as np

from .arith import (
    ResourceLimitError,
    omega_range,
    prime_mask,
    prime_range,
    squarefree_range,
    totient_range,
)
from .equation import _cap_for, powerful_cototients

SCAN_C_CAP = 100_000
DEFAULT_BLOCK = 4096


@dataclass(frozen=True)
class ScanRow:
    """Per-c record: solution count, Goldbach count, and structure."""

    c: int
    solutions: int
    goldbach: int
    residual: int
    histogram: dict[int, int]  # omega -> count
    max_n: int


@dataclass(frozen=True)
class DyadicBlock:
    j: int
    lo: int
    hi: int
    max_residual: int
    argmax_c: int


@dataclass(frozen=True)
class ScanSummary:
    c_from: int
    c_to: int
    blocks: tuple[DyadicBlock, ...]
    slope: Optional[float]
    slope_min_lo: int
    slope_points: int


@dataclass(frozen=True)
class ScanTables:
    """Shared read-only state for scan workers."""

    c_to: int
    phi: np.ndarray
    omega: np.ndarray
    sqfree: np.ndarray
    primes: np.ndarray
    isprime: np.ndarray
    pow_psi: np.ndarray
    pow_n: np.ndarray
    pow_a: np.ndarray
    pow_b: np.ndarray
    pow_omega: np.ndarray


@dataclass(frozen=True)
class BlockSolutions:
    """Deduplicated solutions for c in [c_lo, c_hi), sorted by (c, n).

    kind 0 rows came from an (A, p) pair stored in (x, y); kind 1 rows are
    powerful n = x^2 * y^3.
    """

    c_lo: int
    c_hi: int
    c: np.ndarray
    n: np.ndarray
    omega: np.ndarray
    squarefree: np.ndarray
    kind: np.ndarray
    x: np.ndarray
    y: np.ndarray


@lru_cache(maxsize=2)
def build_scan_tables(c_to: int) -> ScanTables:
    pow_psi, pow_n, pow_a, pow_b, pow_omega = powerful_cototients(_cap_for(c_to))
    keep = slice(0, int(np.searchsorted(pow_psi, c_to + 1)))
    return ScanTables(
        c_to=c_to,
        phi=totient_range(c_to),
        omega=omega_range(c_to),
        sqfree=squarefree_range(c_to),
        primes=prime_range(c_to),
        isprime=prime_mask(c_to + 1),
        pow_psi=pow_psi[keep],
        pow_n=pow_n[keep],
        pow_a=pow_a[keep],
        pow_b=pow_b[keep],
        pow_omega=pow_omega[keep],
    )


def _multi_arange(starts: np.ndarray, stops: np.ndarray) -> np.ndarray:
    """Concatenate arange(starts[i], stops[i]) for all i, vectorized."""
    counts = np.maximum(stops - starts, 0)
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    out = np.ones(total, dtype=np.int64)
    nz = counts > 0
    s = starts[nz]
    cnt = counts[nz]
    first = np.concatenate(([0], np.cumsum(cnt)[:-1]))
    out[first[0]] = s[0]
    out[first[1:]] = s[1:] - (s[:-1] + cnt[:-1] - 1)
    np.cumsum(out, out=out)
    return out


def _block_solutions(tables: ScanTables, c_lo: int, c_hi: int) -> BlockSolutions:
    """All solutions with c in [c_lo, c_hi), deduplicated, sorted by (c, n)."""
    cols = []
    if c_hi - 2 >= 2:
        A = np.arange(2, c_hi - 1, dtype=np.int64)
        phi_a = tables.phi[A]
        d = A - phi_a
        p_lo = np.maximum(-((phi_a - c_lo) // d), 2)  # ceil((c_lo - phi)/d)
        p_hi = (c_hi - 1 - phi_a) // d
        li = np.searchsorted(tables.primes, p_lo, side="left")
        hi = np.searchsorted(tables.primes, p_hi, side="right")
        counts = np.maximum(hi - li, 0)
        A_rep = np.repeat(A, counts)
        p = tables.primes[_multi_arange(li, np.maximum(hi, li))]
        keep = A_rep % p != 0  # p | A would change phi(A*p)
        A_rep = A_rep[keep]
        p = p[keep]
        phi_rep = tables.phi[A_rep]
        cols.append(
            (
                (A_rep - phi_rep) * p + phi_rep,
                A_rep * p,
                tables.omega[A_rep].astype(np.int64) + 1,
                tables.sqfree[A_rep],
                np.zeros(len(p), dtype=np.int8),
                A_rep,
                p,
            )
        )
    plo, phi_idx = np.searchsorted(tables.pow_psi, [c_lo, c_hi])
    if phi_idx > plo:
        span = slice(int(plo), int(phi_idx))
        size = phi_idx - plo
        cols.append(
            (
                tables.pow_psi[span],
                tables.pow_n[span],
                tables.pow_omega[span],
                np.zeros(size, dtype=bool),  # powerful n > 1 is never squarefree
                np.ones(size, dtype=np.int8),
                tables.pow_a[span],
                tables.pow_b[span],
            )
        )
    if not cols:
        e = np.empty(0, dtype=np.int64)
        return BlockSolutions(c_lo, c_hi, e, e, e, e.astype(bool), e.astype(np.int8), e, e)
    c_arr, n_arr, om, sq, kind, x, y = (np.concatenate(parts) for parts in zip(*cols))
    key = c_arr * np.int64(tables.c_to**2 + 1) + n_arr
    order = np.argsort(key, kind="stable")
    key = key[order]
    uniq = np.ones(len(key), dtype=bool)
    uniq[1:] = key[1:] != key[:-1]
    sel = order[uniq]
    return BlockSolutions(
        c_lo, c_hi, c_arr[sel], n_arr[sel], om[sel], sq[sel], kind[sel], x[sel], y[sel]
    )


def _block_rows(tables: ScanTables, c_lo: int, c_hi: int) -> list[ScanRow]:
    sols = _block_solutions(tables, c_lo, c_hi)
    cs = np.arange(c_lo, c_hi, dtype=np.int64)
    bounds = np.searchsorted(sols.c, np.arange(c_lo, c_hi + 1))
    half = np.searchsorted(tables.primes, (cs + 1) // 2, side="right")
    n_list = sols.n.tolist()
    om_list = sols.omega.tolist()
    rows = []
    for k in range(len(cs)):
        c = int(cs[k])
        lo, hi = int(bounds[k]), int(bounds[k + 1])
        t_count = hi - lo
        hist: dict[int, int] = {}
        for om in om_list[lo:hi]:
            hist[om] = hist.get(om, 0) + 1
        g = int(tables.isprime[(c + 1) - tables.primes[: half[k]]].sum())
        residual = t_count - g
        if residual < -1:
            raise RuntimeError(f"residual {residual} < -1 at c = {c}; bug")
        rows.append(
            ScanRow(
                c=c,
                solutions=t_count,
                goldbach=g,
                residual=residual,
                histogram=dict(sorted(hist.items())),
                max_n=int(n_list[hi - 1]) if t_count else 0,
            )
        )
    return rows


_WORKER_TABLES: Optional[ScanTables] = None


def _worker_rows(span: tuple[int, int]) -> list[ScanRow]:
    assert _WORKER_TABLES is not None
    return _block_rows(_WORKER_TABLES, span[0], span[1])


def _spans(c_from: int, c_to: int, block_size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + block_size, c_to + 1)) for lo in range(c_from, c_to + 1, block_size)]


def scan(
    c_from: int,
    c_to: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK,
    cap: int = SCAN_C_CAP,
    allow_large: bool = False,
) -> tuple[list[ScanRow], ScanSummary]:
    """Scan every c in [c_from, c_to]; rows come back in ascending c.

    The result does not depend on workers or block_size: blocks partition
    the c range, and each block is computed from shared immutable tables.
    """
    if not 2 <= c_from <= c_to:
        raise ValueError(f"need 2 <= c_from <= c_to, got [{c_from}, {c_to}]")
    if c_to > cap and not allow_large:
        raise ResourceLimitError(
            f"c_to = {c_to} exceeds the scan cap {cap}; pass allow_large to override"
        )
    if c_to > 1_500_000:
        raise ResourceLimitError(f"c_to = {c_to} is beyond the int64-safe scan range")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    tables = build_scan_tables(c_to)
    spans = _spans(c_from, c_to, block_size)
    if workers == 1 or len(spans) == 1:
        batches = [_block_rows(tables, lo, hi) for lo, hi in spans]
    else:
        global _WORKER_TABLES
        _WORKER_TABLES = tables
        try:
            with ProcessPoolExecutor(
                max_workers=min(workers, len(spans)), mp_context=get_context("fork")
            ) as pool:
                batches = list(pool.map(_worker_rows, spans))
        finally:
            _WORKER_TABLES = None
    rows = [row for batch in batches for row in batch]
    return rows, summarize(rows, c_from, c_to)


def iter_solution_blocks(
    c_from: int, c_to: int, block_size: int = DEFAULT_BLOCK
) -> Iterator[BlockSolutions]:
    """Stream per-block solution detail (single process)."""
    tables = build_scan_tables(c_to)
    for lo, hi in _spans(c_from, c_to, block_size):
        yield _block_solutions(tables, lo, hi)


# ---------------------------------------------------------------------------
# summary and formatting


def summarize(rows: list[ScanRow], c_from: int, c_to: int, slope_min_lo: int = 256) -> ScanSummary:
    """Dyadic-block maxima of the residual and a log-log slope fit.

    The fit uses blocks whose dyadic start is at least slope_min_lo,
    regressing log(max residual + 1) on log(block midpoint).
    """
    residual = {row.c: row.residual for row in rows}
    blocks = []
    j = c_from.bit_length() - 1
    while 2**j <= c_to:
        lo = max(2**j, c_from)
        hi = min(2 ** (j + 1) - 1, c_to)
        best_c = lo
        best = residual[lo]
        for c in range(lo + 1, hi + 1):
            if residual[c] > best:
                best = residual[c]
                best_c = c
        blocks.append(DyadicBlock(j=j, lo=lo, hi=hi, max_residual=best, argmax_c=best_c))
        j += 1
    fit = [b for b in blocks if 2**b.j >= slope_min_lo]
    slope = None
    if len(fit) >= 2:
        xs = np.log(np.array([(b.lo + b.hi) / 2 for b in fit]))
        ys = np.log(np.array([b.max_residual + 1 for b in fit], dtype=np.float64))
        slope = float(np.polyfit(xs, ys, 1)[0])
    return ScanSummary(
        c_from=c_from,
        c_to=c_to,
        blocks=tuple(blocks),
        slope=slope,
        slope_min_lo=slope_min_lo,
        slope_points=len(fit),
    )


TABLE_HEADER = "# c\tT\tG\tresidual\thistogram"


def format_row(row: ScanRow) -> str:
    hist = ",".join(f"{k}:{v}" for k, v in sorted(row.histogram.items())) or "-"
    return f"{row.c}\t{row.solutions}\t{row.goldbach}\t{row.residual}\t{hist}"


def format_table(rows: list[ScanRow]) -> str:
    lines = [TABLE_HEADER]
    lines.extend(format_row(row) for row in rows)
    return "\n".join(lines) + "\n"


def summary_to_json(summary: ScanSummary) -> str:
    doc = {
        "c_from": summary.c_from,
        "c_to": summary.c_to,
        "dyadic_blocks": [
            {
                "j": b.j,
                "lo": b.lo,
                "hi": b.hi,
                "max_residual": b.max_residual,
                "argmax_c": b.argmax_c,
            }
            for b in summary.blocks
        ],
        "slope": None if summary.slope is None else round(summary.slope, 6),
        "slope_min_lo": summary.slope_min_lo,
        "slope_points": summary.slope_points,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def format_solutions(rows_detail: Iterator[BlockSolutions]) -> Iterator[str]:
    """(c, n) pairs, one per line, in scan order."""
    for block in rows_detail:
        c_list = block.c.tolist()
        n_list = block.n.tolist()
        for c, n in zip(c_list, n_list):
            yield f"{c}\t{n}"
