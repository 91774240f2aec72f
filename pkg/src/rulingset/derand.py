"""Seed fixing for the sparsify-and-hit sampler by conditional expectations.

Vertex ``u`` is sampled into ``Z`` when its color hashes to bucket 0. The
potential of a seed is::

    psi = |E(G[Z])| + W * #{u : deg(u) >= threshold, u not in Z, N(u) misses Z}

and the seed is fixed chunk by chunk, always keeping the candidate whose
conditional expectation of ``psi`` is smallest.

All expectations are exact. Conditional expectations are kept as integer
sums over the uncommitted seed bits (``2^(r-j)`` times the expectation), so
candidate comparisons never round.

Evaluating the sums uses one structural fact about the hash family: the
bucket of ``x`` is ``low(a0) XOR low(a1*x + ... + a_{k-1}*x^(k-1))``, so only
the low ``bucket_bits`` bits of the constant coefficient influence ``psi``.
The remaining bits of ``a0`` contribute a power-of-two multiplicity. A table
indexed by (tail coefficients, low bits of ``a0``) therefore holds every
seed's potential, and any prefix sum is a rectangle sum over that table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    CandidateOverflow,
    DegenerateGraph,
    DomainTooSmall,
    EnumerationBudgetExceeded,
    InvalidInput,
    InvalidK,
    SeedNotCommitted,
)
from .graph import Coloring, Graph
from .kwise import FamilyParams, Seed, evaluate, field_mul_array

DEFAULT_BUDGET = 1 << 24
_BLOCK_CELLS = 1 << 21


@dataclass(frozen=True)
class SamplerParams:
    family: FamilyParams
    epsilon: Fraction
    c: float
    degree_threshold: int
    weight: int

    def __post_init__(self):
        if self.degree_threshold < 1:
            raise InvalidInput("degree threshold must be at least 1")
        if self.weight < 1:
            raise InvalidInput("bad-vertex weight W must be at least 1")

    @property
    def f(self) -> int:
        return self.family.buckets

    @property
    def k(self) -> int:
        return self.family.k

    @property
    def seed_bits(self) -> int:
        return self.family.seed_bits


def _iroot_ceil(x: int, e: int) -> int:
    """Smallest integer ``r >= 0`` with ``r**e >= x`` (exact for big ints)."""
    if x <= 0:
        return 0
    lo, hi = 0, 1
    while hi**e < x:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**e >= x:
            hi = mid
        else:
            lo = mid + 1
    return lo


def degree_threshold(f: int, delta: int, epsilon) -> int:
    """``ceil(f * delta**epsilon)`` computed exactly for rational ``epsilon``."""
    eps = Fraction(epsilon).limit_denominator(10_000)
    p, q = eps.numerator, eps.denominator
    return max(1, _iroot_ceil(f**q * delta**p, q))


def default_k(n: int, delta: int, epsilon, c: float) -> int:
    """``max(4, (32c/eps) * log n / log delta)`` rounded up to an even integer."""
    eps = float(Fraction(epsilon))
    raw = (32 * c / eps) * math.log2(n) / math.log2(delta)
    k = math.ceil(raw - 1e-9)
    k += k % 2
    return max(4, k)


def select_parameters(
    n: int,
    delta: int,
    epsilon=Fraction(1, 3),
    c: float = 1.0,
    *,
    domain_size: int | None = None,
    k: int | None = None,
    weight: int | None = None,
    w_exponent: int = 4,
) -> SamplerParams:
    """Sampler parameters for one iteration on a graph of max degree ``delta``.

    ``f`` is the largest power of two not above ``sqrt(delta)``. The hash domain
    defaults to ``n`` points (the identifier palette).
    """
    if delta < 2:
        raise DegenerateGraph(f"max degree {delta} < 2")
    if n < 2:
        raise DegenerateGraph(f"vertex count {n} < 2")
    eps = Fraction(epsilon).limit_denominator(10_000)
    if not 0 < eps <= 1:
        raise InvalidInput(f"epsilon {epsilon} outside (0, 1]")
    if k is None:
        k = default_k(n, delta, eps, c)
    bucket_bits = (delta.bit_length() - 1) // 2
    f = 1 << bucket_bits
    family = FamilyParams.create(k, domain_size if domain_size is not None else n, bucket_bits)
    return SamplerParams(
        family=family,
        epsilon=eps,
        c=c,
        degree_threshold=degree_threshold(f, delta, eps),
        weight=weight if weight is not None else n**w_exponent,
    )


def bellare_rompel_bound(k: int, mu: float, lam: float) -> float:
    """Tail bound ``8((k*mu + k^2)/lam^2)^(k/2)`` for k-wise independent sums, capped at 1."""
    if k < 4 or k % 2:
        raise InvalidK(f"k must be an even integer >= 4, got {k}")
    if lam <= 0:
        raise InvalidInput("lambda must be positive")
    if math.isinf(lam):
        return 0.0
    try:
        value = 8.0 * ((k * mu + k * k) / (lam * lam)) ** (k / 2)
    except OverflowError:
        return 1.0
    return min(1.0, value)


# -- potential of a single seed ----------------------------------------------


@dataclass(frozen=True)
class PotentialState:
    """Potential of one committed seed.

    ``bad_count`` counts high-degree vertices outside ``Z`` with no neighbor in
    ``Z``. ``uncovered_count`` drops the "outside ``Z``" condition.
    """

    selected: frozenset
    edges_in_z: int
    bad_count: int
    uncovered_count: int
    weight: int

    @property
    def psi(self) -> int:
        return self.edges_in_z + self.weight * self.bad_count


def _check_instance(g: Graph, col: Coloring, params: SamplerParams) -> np.ndarray:
    if len(col) != g.n:
        raise InvalidInput(f"coloring has {len(col)} entries for {g.n} vertices")
    if col.palette_size > params.family.domain_size:
        raise DomainTooSmall(
            f"palette {col.palette_size} exceeds hash domain {params.family.domain_size}"
        )
    return col.array()


def psi_of_seed(g: Graph, col: Coloring, params: SamplerParams, seed: Seed) -> PotentialState:
    _check_instance(g, col, params)
    if not seed.committed:
        raise SeedNotCommitted(f"{seed.fixed_bits} of {seed.length} seed bits fixed")
    fam = params.family
    cache = {}
    for c in set(col.color):
        cache[c] = evaluate(fam, seed, c) == 0
    z = [cache[c] for c in col.color]
    edges = sum(1 for u, v in g.edges if z[u] and z[v])
    bad = uncovered = 0
    for u in range(g.n):
        nbrs = g.adjacency[u]
        if len(nbrs) < params.degree_threshold:
            continue
        if not any(z[w] for w in nbrs):
            uncovered += 1
            if not z[u]:
                bad += 1
    return PotentialState(
        selected=frozenset(u for u in range(g.n) if z[u]),
        edges_in_z=edges,
        bad_count=bad,
        uncovered_count=uncovered,
        weight=params.weight,
    )


def selected_set(g: Graph, col: Coloring, params: SamplerParams, seed: Seed) -> frozenset:
    if not seed.committed:
        raise SeedNotCommitted(f"{seed.fixed_bits} of {seed.length} seed bits fixed")
    hit = {c: evaluate(params.family, seed, c) == 0 for c in set(col.color)}
    return frozenset(u for u in range(g.n) if hit[col.color[u]])


# -- exact prefix sums ---------------------------------------------------------


@dataclass(frozen=True)
class _Cell:
    """Rectangle of the (tail, low-a0) table selected by a seed prefix."""

    tail_lo: int
    tail_hi: int
    v_lo: int
    v_hi: int
    multiplicity: int


def _prefix_cell(fam: FamilyParams, prefix: int, j: int) -> _Cell:
    b, bo = fam.b, fam.bucket_bits
    tail_bits = (fam.k - 1) * b
    if j <= b:
        free = b - j
        free_rel = min(bo, free)
        fixed_rel = prefix & ((1 << (bo - free_rel)) - 1)
        v_lo = fixed_rel << free_rel
        return _Cell(0, 1 << tail_bits, v_lo, v_lo + (1 << free_rel), 1 << (free - free_rel))
    a0 = prefix >> (j - b)
    v = a0 & ((1 << bo) - 1)
    tail_prefix = prefix & ((1 << (j - b)) - 1)
    rem = tail_bits - (j - b)
    return _Cell(tail_prefix << rem, (tail_prefix + 1) << rem, v, v + 1, 1)


class _Instance:
    """Arrays shared by the centralized table and the per-node partials."""

    def __init__(self, g: Graph, col: Coloring, params: SamplerParams):
        colors = _check_instance(g, col, params)
        self.g = g
        self.params = params
        self.fam = params.family
        self.f = params.f
        if g.n:
            self.points, self.cidx = np.unique(colors, return_inverse=True)
        else:
            self.points = np.zeros(0, dtype=np.int64)
            self.cidx = np.zeros(0, dtype=np.int64)
        eu, ew = g.edge_arrays()
        self.eu, self.ew = eu, ew
        self.cu = self.cidx[eu]
        self.cw = self.cidx[ew]
        deg = g.degrees()
        self.high = np.flatnonzero(deg >= params.degree_threshold)
        pair_h, pair_c = [], []
        for h, u in enumerate(self.high.tolist()):
            for w in (u,) + g.adjacency[u]:
                pair_h.append(h)
                pair_c.append(self.cidx[w])
        self.pair_h = np.asarray(pair_h, dtype=np.int64)
        self.pair_c = np.asarray(pair_c, dtype=np.int64)
        self.tail_count = 1 << ((self.fam.k - 1) * self.fam.b)

    def tail_buckets(self, lo: int, hi: int) -> np.ndarray:
        """``low(a1*x + ... + a_{k-1}*x^(k-1))`` for tails ``lo..hi-1`` and every color."""
        fam = self.fam
        tails = np.arange(lo, hi, dtype=np.uint64)
        pts = self.points.astype(np.uint64)[None, :]
        acc = np.zeros((hi - lo, pts.shape[1]), dtype=np.uint64)
        mask = np.uint64(fam.field.mask)
        for i in range(fam.k - 1, 0, -1):
            a_i = (tails >> np.uint64(fam.b * (fam.k - 1 - i))) & mask
            acc = field_mul_array(fam.field, acc, pts) ^ a_i[:, None]
        acc = field_mul_array(fam.field, acc, pts)
        return (acc & np.uint64(self.f - 1)).astype(np.int64)

    def blocks(self, lo: int, hi: int):
        step = max(1, _BLOCK_CELLS // max(1, len(self.points), len(self.pair_c), len(self.cu)))
        for start in range(lo, hi, step):
            stop = min(hi, start + step)
            yield start, stop, self.tail_buckets(start, stop)


class PsiTable:
    """Per-(tail, low-a0) totals of sampled edges and bad vertices.

    Stored as 2-D prefix sums so every seed-prefix sum costs O(1).
    """

    def __init__(self, g: Graph, col: Coloring, params: SamplerParams, budget: int = DEFAULT_BUDGET):
        inst = _Instance(g, col, params)
        cells = inst.tail_count * inst.f
        if cells > budget:
            raise EnumerationBudgetExceeded(cells, budget)
        self.params = params
        self.family = params.family
        f = inst.f
        ea = np.zeros((inst.tail_count, f), dtype=np.int64)
        bad = np.zeros((inst.tail_count, f), dtype=np.int64)
        n_high = len(inst.high)
        for lo, hi, gb in inst.blocks(0, inst.tail_count):
            rows = hi - lo
            gu = gb[:, inst.cu]
            match = gu == gb[:, inst.cw]
            row_idx = np.broadcast_to(np.arange(rows)[:, None], gu.shape)
            flat = (row_idx * f + gu)[match]
            ea[lo:hi] = np.bincount(flat, minlength=rows * f).reshape(rows, f)
            if n_high:
                present = np.zeros((rows, n_high, f), dtype=bool)
                present[np.arange(rows)[:, None], inst.pair_h[None, :], gb[:, inst.pair_c]] = True
                bad[lo:hi] = n_high - present.sum(axis=1)
        self._ea = _prefix2d(ea)
        self._bad = _prefix2d(bad)

    def sums(self, prefix: int, j: int) -> tuple[int, int]:
        """(sampled-edge sum, bad-vertex sum) over all completions of a prefix."""
        cell = _prefix_cell(self.family, prefix, j)
        ea = _rect(self._ea, cell) * cell.multiplicity
        bad = _rect(self._bad, cell) * cell.multiplicity
        return ea, bad

    def psi_sum(self, prefix: int, j: int) -> int:
        ea, bad = self.sums(prefix, j)
        return ea + self.params.weight * bad


def _prefix2d(a: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + 1, a.shape[1] + 1), dtype=np.int64)
    out[1:, 1:] = a.cumsum(axis=0).cumsum(axis=1)
    return out


def _rect(p: np.ndarray, cell: _Cell) -> int:
    t0, t1, v0, v1 = cell.tail_lo, cell.tail_hi, cell.v_lo, cell.v_hi
    return int(p[t1, v1]) - int(p[t0, v1]) - int(p[t1, v0]) + int(p[t0, v0])


def _check_seed_shape(params: SamplerParams, seed: Seed) -> None:
    if (seed.k, seed.b) != (params.family.k, params.family.b):
        raise InvalidInput("seed shape does not match the sampler family")


def conditional_psi_sum(
    g: Graph,
    col: Coloring,
    params: SamplerParams,
    prefix: Seed,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Sum of ``psi`` over every completion of ``prefix``.

    Dividing by ``2^(r - prefix.fixed_bits)`` gives ``E[psi | prefix]``.
    """
    _check_seed_shape(params, prefix)
    table = PsiTable(g, col, params, budget)
    return table.psi_sum(prefix.prefix, prefix.fixed_bits)


# -- chunked fixing ------------------------------------------------------------


@dataclass(frozen=True)
class ChunkSchedule:
    """Partition of the ``r`` seed bits into consecutive chunks, most significant first."""

    chunk_bits: int
    seed_bits: int

    def __post_init__(self):
        if self.chunk_bits < 1:
            raise InvalidInput("chunk_bits must be at least 1")

    @classmethod
    def for_graph(cls, n: int, params: SamplerParams, chunk_bits: int | None = None):
        if chunk_bits is None:
            chunk_bits = max(1, int(math.floor(math.log2(max(n, 2)))))
        return cls(chunk_bits, params.seed_bits)

    @property
    def t(self) -> int:
        return -(-self.seed_bits // self.chunk_bits)

    @property
    def order(self) -> list[tuple[int, int]]:
        """``(first bit, width)`` per chunk, bit 0 being the most significant."""
        return [
            (start, min(self.chunk_bits, self.seed_bits - start))
            for start in range(0, self.seed_bits, self.chunk_bits)
        ]


@dataclass(frozen=True)
class ChunkRecord:
    index: int
    start: int
    width: int
    sums: tuple[int, ...]
    chosen: int
    suffix_bits: int

    @property
    def candidates(self) -> range:
        return range(len(self.sums))

    @property
    def parent_sum(self) -> int:
        return sum(self.sums)

    def as_dict(self) -> dict:
        return {
            "chunk": self.index,
            "start": self.start,
            "width": self.width,
            "candidates": list(self.candidates),
            "sums": list(self.sums),
            "chosen": self.chosen,
            "suffix_bits": self.suffix_bits,
        }


def _argmin(values) -> int:
    best = 0
    for i, v in enumerate(values):
        if v < values[best]:
            best = i
    return best


def fix_seed(
    g: Graph,
    col: Coloring,
    params: SamplerParams,
    schedule: ChunkSchedule | None = None,
    budget: int = DEFAULT_BUDGET,
) -> tuple[Seed, list[ChunkRecord]]:
    """Commit the whole seed chunk by chunk, never raising ``E[psi | prefix]``."""
    if schedule is None:
        schedule = ChunkSchedule.for_graph(g.n, params)
    if schedule.seed_bits != params.seed_bits:
        raise InvalidInput("schedule does not cover the sampler seed")
    table = PsiTable(g, col, params, budget)
    seed = Seed.for_family(params.family)
    trace = []
    for index, (start, width) in enumerate(schedule.order):
        base = seed.prefix << width
        j = start + width
        sums = tuple(table.psi_sum(base | cand, j) for cand in range(1 << width))
        chosen = _argmin(sums)
        seed = seed.extend(chosen, width)
        trace.append(ChunkRecord(index, start, width, sums, chosen, params.seed_bits - j))
    return seed, trace


@dataclass(frozen=True)
class PreconditionReport:
    expected_edges: Fraction
    bad_probability_sum: Fraction
    expected_psi: Fraction
    weight: int
    ok: bool

    def as_dict(self) -> dict:
        return {
            "expected_edges": str(self.expected_edges),
            "bad_probability_sum": str(self.bad_probability_sum),
            "expected_psi": str(self.expected_psi),
            "weight": self.weight,
            "ok": self.ok,
        }


def check_precondition(
    g: Graph, col: Coloring, params: SamplerParams, budget: int = DEFAULT_BUDGET
) -> PreconditionReport:
    """Exact ``E[E_A]``, ``sum_u Pr[X_u]`` and ``E[psi]``; ``ok`` iff ``E[psi] < W``."""
    table = PsiTable(g, col, params, budget)
    total = 1 << params.seed_bits
    ea, bad = table.sums(0, 0)
    e_edges = Fraction(ea, total)
    e_bad = Fraction(bad, total)
    e_psi = e_edges + params.weight * e_bad
    return PreconditionReport(e_edges, e_bad, e_psi, params.weight, e_psi < params.weight)


# -- distributed fixing ----------------------------------------------------------


def _node_partials(inst: _Instance, prefix: int, j: int, width: int) -> list[list[int]]:
    """Each node's share of the prefix sum for every candidate of the next chunk.

    Node ``u`` owns the sampled edges ``(u, w)`` with ``u < w`` and its own bad
    indicator, so the shares of all nodes add up to the centralized sum. Only
    the hash values at colors of ``N+(u)`` enter ``u``'s share.
    """
    fam, f, n = inst.fam, inst.f, inst.g.n
    weight = inst.params.weight
    parent = _prefix_cell(fam, prefix, j)
    j2 = j + width
    cells = [_prefix_cell(fam, (prefix << width) | c, j2) for c in range(1 << width)]
    # Candidates differ in their tail range only through tail bits inside the chunk.
    groups = sorted({(c.tail_lo, c.tail_hi) for c in cells})
    group_of = {rng: i for i, rng in enumerate(groups)}
    span = groups[0][1] - groups[0][0]
    ea = np.zeros((len(groups), n, f), dtype=np.int64)
    bad = np.zeros((len(groups), n, f), dtype=np.int64)
    n_high = len(inst.high)
    for lo, hi, gb in inst.blocks(parent.tail_lo, parent.tail_hi):
        rows = hi - lo
        grp = (np.arange(lo, hi) - parent.tail_lo) // span
        gu = gb[:, inst.cu]
        match = gu == gb[:, inst.cw]
        owner = np.broadcast_to(inst.eu[None, :], gu.shape)
        g_idx = np.broadcast_to(grp[:, None], gu.shape)
        flat = ((g_idx * n + owner) * f + gu)[match]
        ea += np.bincount(flat, minlength=len(groups) * n * f).reshape(len(groups), n, f)
        if n_high:
            present = np.zeros((rows, n_high, f), dtype=bool)
            present[np.arange(rows)[:, None], inst.pair_h[None, :], gb[:, inst.pair_c]] = True
            absent = (~present).astype(np.int64)
            np.add.at(bad, (grp[:, None], inst.high[None, :]), absent)
    ea_cum = np.concatenate([np.zeros((len(groups), n, 1), np.int64), ea.cumsum(axis=2)], axis=2)
    bad_cum = np.concatenate([np.zeros((len(groups), n, 1), np.int64), bad.cumsum(axis=2)], axis=2)
    shares = []
    for cell in cells:
        gi = group_of[(cell.tail_lo, cell.tail_hi)]
        e = (ea_cum[gi, :, cell.v_hi] - ea_cum[gi, :, cell.v_lo]).tolist()
        x = (bad_cum[gi, :, cell.v_hi] - bad_cum[gi, :, cell.v_lo]).tolist()
        m = cell.multiplicity
        shares.append([m * (e[u] + weight * x[u]) for u in range(n)])
    return shares


def distributed_fix_seed(
    sim,
    g: Graph,
    col: Coloring,
    params: SamplerParams,
    schedule: ChunkSchedule | None = None,
    machine_of=None,
    budget: int = DEFAULT_BUDGET,
) -> tuple[Seed, list[ChunkRecord]]:
    """Fix the seed with the per-chunk collect / aggregate / broadcast protocol.

    Three simulated rounds per chunk: every node sends its share for candidate
    ``c`` to machine ``c``; each such machine forwards the total to the leader;
    the leader broadcasts the minimizing candidate.
    """
    if schedule is None:
        schedule = ChunkSchedule.for_graph(g.n, params)
    if schedule.seed_bits != params.seed_bits:
        raise InvalidInput("schedule does not cover the sampler seed")
    inst = _Instance(g, col, params)
    cells = inst.tail_count * inst.f
    if cells > budget:
        raise EnumerationBudgetExceeded(cells, budget)
    machines = sim.config.machine_count
    leader = sim.config.coordinator
    if machine_of is None:
        machine_of = list(range(g.n))
    for start, width in schedule.order:
        if (1 << width) > machines:
            raise CandidateOverflow(f"{1 << width} candidates for {machines} machines")
    seed = Seed.for_family(params.family)
    trace = []
    for index, (start, width) in enumerate(schedule.order):
        shares = _node_partials(inst, seed.prefix, start, width)
        ncand = 1 << width
        collect = {}
        for u in range(g.n):
            collect[machine_of[u]] = {c: [shares[c][u]] for c in range(ncand)}
        inbox = sim.exchange(collect, label=f"seed chunk {index}: collect")
        aggregate = {}
        for c in range(ncand):
            total = sum(words[0] for _, words in inbox.get(c, []))
            aggregate[c] = {leader: [total]}
        inbox = sim.exchange(aggregate, label=f"seed chunk {index}: aggregate")
        totals = [0] * ncand
        for sender, words in inbox.get(leader, []):
            totals[sender] = words[-1]
        chosen = _argmin(totals)
        sim.exchange(
            {leader: {m: [chosen] for m in range(machines)}},
            label=f"seed chunk {index}: broadcast",
        )
        seed = seed.extend(chosen, width)
        trace.append(
            ChunkRecord(index, start, width, tuple(totals), chosen, params.seed_bits - start - width)
        )
    return seed, trace
