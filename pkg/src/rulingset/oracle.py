"""Brute-force oracles: every claim is checked by enumerating all seeds.

Nothing here reuses the engine's shortcuts. Hash values are recomputed from
the full seed with a separate multiply-then-reduce routine, and every seed
is visited.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .derand import ChunkRecord, SamplerParams
from .errors import EnumerationBudgetExceeded, InvalidInput, InvalidTrace
from .graph import Coloring, Graph
from .kwise import FamilyParams

ORACLE_BUDGET = 1 << 22
_BATCH = 1 << 12

STATISTICS = ("E_A", "bad_count", "uncovered", "psi")


def _gf_mul(a: np.ndarray, x: np.ndarray, b: int, modulus: int) -> np.ndarray:
    """Schoolbook carry-less product, then long division by the modulus."""
    a = a.astype(np.uint64)
    x = x.astype(np.uint64)
    prod = np.zeros(np.broadcast(a, x).shape, dtype=np.uint64)
    for i in range(b):
        bit = (x >> np.uint64(i)) & np.uint64(1)
        prod ^= (a << np.uint64(i)) * bit
    for d in range(2 * b - 2, b - 1, -1):
        top = (prod >> np.uint64(d)) & np.uint64(1)
        prod ^= np.uint64(modulus << (d - b)) * top
    return prod


def _all_buckets(fam: FamilyParams, seeds: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Bucket of each point under each seed: shape ``(len(seeds), len(points))``."""
    b, k = fam.b, fam.k
    mask = np.uint64((1 << b) - 1)
    s = seeds.astype(np.uint64)[:, None]
    x = points.astype(np.uint64)[None, :]
    coeff = [(s >> np.uint64(b * (k - 1 - i))) & mask for i in range(k)]
    acc = np.broadcast_to(coeff[k - 1], (len(seeds), len(points))).copy()
    for i in range(k - 2, -1, -1):
        acc = _gf_mul(acc, x, b, fam.field.modulus) ^ coeff[i]
    return (acc & np.uint64(fam.buckets - 1)).astype(np.int64)


def _check_budget(r: int, budget: int) -> None:
    if (1 << r) > budget:
        raise EnumerationBudgetExceeded(1 << r, budget)


def seed_statistics(g: Graph, col: Coloring, params: SamplerParams, budget: int = ORACLE_BUDGET):
    """Per-seed ``(E_A, bad_count, uncovered)`` for every seed, in seed order."""
    fam = params.family
    r = fam.seed_bits
    _check_budget(r, budget)
    colors = np.asarray(col.color, dtype=np.int64)
    if len(colors) != g.n:
        raise InvalidInput("coloring does not match graph")
    eu, ew = g.edge_arrays()
    high = [u for u in range(g.n) if len(g.adjacency[u]) >= params.degree_threshold]
    total = 1 << r
    ea = np.zeros(total, dtype=np.int64)
    bad = np.zeros(total, dtype=np.int64)
    unc = np.zeros(total, dtype=np.int64)
    for start in range(0, total, _BATCH):
        seeds = np.arange(start, min(total, start + _BATCH), dtype=np.int64)
        if g.n == 0:
            continue
        sel = _all_buckets(fam, seeds, colors) == 0
        ea[start : start + len(seeds)] = (sel[:, eu] & sel[:, ew]).sum(axis=1)
        for u in high:
            miss = ~sel[:, list(g.adjacency[u])].any(axis=1)
            unc[start : start + len(seeds)] += miss
            bad[start : start + len(seeds)] += miss & ~sel[:, u]
    return ea, bad, unc


def enumerate_expectation(
    g: Graph, col: Coloring, params: SamplerParams, statistic: str = "psi", budget: int = ORACLE_BUDGET
) -> Fraction:
    """Exact mean of a statistic over all ``2^r`` seeds."""
    if statistic not in STATISTICS:
        raise InvalidInput(f"statistic must be one of {STATISTICS}")
    ea, bad, unc = seed_statistics(g, col, params, budget)
    total = len(ea)
    if statistic == "E_A":
        s = int(ea.sum())
    elif statistic == "bad_count":
        s = int(bad.sum())
    elif statistic == "uncovered":
        s = int(unc.sum())
    else:
        s = int(ea.sum()) + params.weight * int(bad.sum())
    return Fraction(s, total)


def _field(record, name):
    if isinstance(record, ChunkRecord):
        return getattr(record, name)
    try:
        return record[name]
    except (KeyError, TypeError):
        raise InvalidTrace(f"record lacks {name!r}") from None


def verify_monotone_trace(trace) -> bool:
    """Conditional expectations along the trace never rise and each choice is a minimum.

    ``trace`` holds :class:`ChunkRecord` objects or their ``as_dict`` forms.
    """
    previous = None
    for pos, record in enumerate(trace):
        sums = list(_field(record, "sums"))
        chosen = _field(record, "chosen")
        width = _field(record, "width")
        suffix = _field(record, "suffix_bits")
        if len(sums) != 1 << width or not 0 <= chosen < len(sums) or suffix < 0:
            raise InvalidTrace(f"record {pos} is malformed")
        parent = Fraction(sum(sums), 1 << (suffix + width))
        if previous is not None and parent != previous:
            return False
        if sums[chosen] != min(sums):
            return False
        current = Fraction(sums[chosen], 1 << suffix)
        if current > parent:
            return False
        previous = current
    return True


def verify_kwise(params: FamilyParams, level: int | None = None, budget: int = ORACLE_BUDGET) -> bool:
    """Every set of at most ``level`` distinct points gets an exactly uniform bucket law."""
    level = params.k if level is None else level
    r = params.seed_bits
    _check_budget(r, budget)
    points = np.arange(params.domain_size, dtype=np.int64)
    seeds = np.arange(1 << r, dtype=np.int64)
    table = np.concatenate(
        [_all_buckets(params, seeds[i : i + _BATCH], points) for i in range(0, len(seeds), _BATCH)]
    )
    f = params.buckets
    total = 1 << r
    for size in range(1, min(level, params.domain_size) + 1):
        if total % f**size or not _uniform_subsets(table.T, f, size, total // f**size):
            return False
    return True


def _uniform_subsets(columns: np.ndarray, f: int, size: int, expect: int) -> bool:
    """Every ``size``-subset of rows of ``columns`` (points x seeds) has a flat joint histogram."""
    d, total = columns.shape
    cells = f**size
    scaled = [columns.astype(np.int32) * f**i for i in range(size)]

    def walk(start: int, depth: int, partial: np.ndarray) -> bool:
        if depth == size - 1:
            rest = scaled[depth][start:]
            if not len(rest):
                return True
            offsets = (np.arange(len(rest), dtype=np.int32) * cells)[:, None]
            counts = np.bincount((rest + partial[None, :] + offsets).ravel(), minlength=len(rest) * cells)
            return bool(np.all(counts == expect))
        return all(
            walk(c + 1, depth + 1, partial + scaled[depth][c]) for c in range(start, d - (size - 1 - depth))
        )

    return walk(0, 0, np.zeros(total, dtype=np.int32))
