"""Deterministic 2-ruling sets: sparsify, gather, solve, deactivate, repeat.

Each pass of the loop colors the active graph, fixes a sampling seed by
conditional expectations, gathers the sampled subgraph ``G[Z]`` on the
coordinator, takes a greedy MIS ``I`` of it, and deactivates ``N+(I)`` along
with every vertex of degree at least ``f * Delta^eps``. Once the maximum
degree drops below the loop floor, a fallback MIS finishes the job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .derand import (
    DEFAULT_BUDGET,
    ChunkRecord,
    ChunkSchedule,
    PreconditionReport,
    check_precondition,
    distributed_fix_seed,
    psi_of_seed,
    select_parameters,
)
from .errors import CapacityViolation, InvalidInput, PreconditionFailed
from .graph import Coloring, Graph, induced_subgraph, max_degree
from .linial import fixpoint_steps
from .mpc import CLIQUE, MPC, ModelConfig, SimTranscript, Simulator, gather_subgraph


@dataclass(frozen=True)
class RunConfig:
    mode: str = MPC
    epsilon: Fraction = Fraction(1, 3)
    c: float = 1.0
    k: int | None = None
    w_exponent: int = 4
    chunk_bits: int | None = None
    degree_floor_const: float = 1.0
    fallback: str = "gather"
    budget: int = DEFAULT_BUDGET
    memory_const: float = 4.0
    lenzen_rounds: int = 2

    def __post_init__(self):
        if self.mode not in (MPC, CLIQUE):
            raise InvalidInput(f"mode must be {MPC!r} or {CLIQUE!r}")
        if self.fallback not in ("gather", "sweep"):
            raise InvalidInput("fallback must be 'gather' or 'sweep'")
        object.__setattr__(self, "epsilon", Fraction(self.epsilon).limit_denominator(10_000))
        if not 0 < self.epsilon <= 1:
            raise InvalidInput(f"epsilon {self.epsilon} outside (0, 1]")
        if self.k is not None and self.k < 1:
            raise InvalidInput("k must be positive")

    def model(self, n: int) -> ModelConfig:
        if self.mode == MPC:
            return ModelConfig.mpc_linear(n, memory_const=self.memory_const)
        return ModelConfig.congested_clique(n, lenzen_rounds=self.lenzen_rounds)


def degree_floor(n: int, const: float = 1.0) -> int:
    """Loop runs while the max degree is at least ``max(16, ceil(log2(n)^4) * const)``."""
    log4 = math.ceil(math.log2(n) ** 4) if n > 1 else 0
    return max(16, math.ceil(log4 * const))


def iteration_cap(delta0: int) -> int:
    """``ceil(log_{6/5} log2 delta0) + 2`` (2 when ``delta0 <= 2``)."""
    if delta0 <= 2:
        return 2
    return math.ceil(math.log(math.log2(delta0)) / math.log(6 / 5)) + 2


@dataclass(frozen=True)
class IterationStats:
    delta: int
    f: int
    threshold: int
    k: int
    seed_bits: int
    chunks: int
    palette: int
    seed: str
    expected_psi: Fraction
    z_size: int
    z_edges: int
    h_size: int
    i_size: int
    coloring_rounds: int
    rounds: int

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "f": self.f,
            "threshold": self.threshold,
            "k": self.k,
            "seed_bits": self.seed_bits,
            "chunks": self.chunks,
            "palette": self.palette,
            "seed": self.seed,
            "expected_psi": str(self.expected_psi),
            "z_size": self.z_size,
            "z_edges": self.z_edges,
            "h_size": self.h_size,
            "i_size": self.i_size,
            "coloring_rounds": self.coloring_rounds,
            "rounds": self.rounds,
        }


@dataclass(frozen=True)
class FallbackStats:
    strategy: str
    vertices: int
    max_degree: int
    mis_size: int
    rounds: int

    def as_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "vertices": self.vertices,
            "max_degree": self.max_degree,
            "mis_size": self.mis_size,
            "rounds": self.rounds,
        }


@dataclass
class RulingSetResult:
    members: tuple[int, ...]
    delta0: int
    degree_floor: int
    iterations: int
    stats: list[IterationStats]
    fallback: FallbackStats
    total_rounds: int
    transcript: SimTranscript
    traces: list[list[ChunkRecord]] = field(default_factory=list)
    reports: list[PreconditionReport] = field(default_factory=list)
    degree_history: list[int] = field(default_factory=list)  # max degree before each pass, then after the last

    @property
    def U(self) -> frozenset:
        return frozenset(self.members)


def greedy_mis(g: Graph, order=None) -> frozenset:
    """Scan vertices in ``order`` (ascending ids by default), keeping each free one."""
    blocked = [False] * g.n
    out = []
    for v in order if order is not None else range(g.n):
        if not blocked[v]:
            out.append(v)
            blocked[v] = True
            for w in g.adjacency[v]:
                blocked[w] = True
    return frozenset(out)


def _notify_neighbors(sim, g, senders, machine_of, alive, label):
    out = {}
    for v in sorted(senders):
        targets = {machine_of[w]: [1] for w in g.adjacency[v] if w in alive}
        if targets:
            out[machine_of[v]] = targets
    return sim.exchange(out, label=label)


def _max_degree_rounds(sim, g, machine_of, label) -> int:
    """Every vertex reports its degree to the coordinator, which broadcasts the max."""
    w = sim.config.coordinator
    inbox = sim.exchange(
        {machine_of[v]: {w: [len(g.adjacency[v])]} for v in range(g.n)}, label=f"{label}: degrees"
    )
    delta = max((words[0] for _, words in inbox.get(w, [])), default=0)
    sim.exchange({w: {m: [delta] for m in range(sim.config.machine_count)}}, label=f"{label}: max")
    return delta


def _color_rounds(sim, g, machine_of, label) -> Coloring:
    """Fixpoint Linial coloring from identifiers; one neighbor exchange per step."""
    ids = Coloring(max(sim.config.n, 1), tuple(machine_of[v] for v in range(g.n)))
    steps = fixpoint_steps(g, ids)
    for i, col in enumerate(steps[:-1]):
        sim.exchange(
            {
                machine_of[v]: {machine_of[w]: [col.color[v]] for w in g.adjacency[v]}
                for v in range(g.n)
                if g.adjacency[v]
            },
            label=f"{label}: linial step {i}",
        )
    return steps[-1]


def fallback_mis(
    g: Graph,
    config: RunConfig | None = None,
    sim: Simulator | None = None,
    machine_of=None,
    coloring: Coloring | None = None,
) -> tuple[frozenset, FallbackStats]:
    """MIS of a low-degree graph, by coordinator gather-and-greedy or by color sweep.

    The gather strategy switches to the sweep when ``G`` does not fit in one
    machine's memory. The sweep visits color classes in increasing order; a
    vertex joins when no neighbor has joined.
    """
    config = config or RunConfig()
    if sim is None:
        sim = Simulator(config.model(g.n))
    if machine_of is None:
        machine_of = list(range(g.n))
    mark = len(sim.transcript.rounds)
    strategy = config.fallback
    if strategy == "gather":
        try:
            got = gather_subgraph(sim, g, range(g.n), sim.config.coordinator, machine_of)
        except CapacityViolation:
            strategy = "sweep"
        else:
            local = greedy_mis(got.graph)
            mis = frozenset(got.mapping[i] for i in local)
            w = sim.config.coordinator
            sim.exchange({w: {machine_of[v]: [1] for v in sorted(mis)}}, label="fallback: announce")
    if strategy == "sweep":
        if coloring is None:
            coloring = _color_rounds(sim, g, machine_of, "fallback")
        joined = set()
        blocked = [False] * g.n
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(coloring.color):
            classes.setdefault(c, []).append(v)
        alive = set(range(g.n))
        for c in range(coloring.palette_size):
            now = [v for v in classes.get(c, []) if not blocked[v]]
            joined.update(now)
            _notify_neighbors(sim, g, now, machine_of, alive, f"fallback: sweep color {c}")
            for v in now:
                for w in g.adjacency[v]:
                    blocked[w] = True
        mis = frozenset(joined)
    stats = FallbackStats(strategy, g.n, max_degree(g), len(mis), sim.transcript.rounds_since(mark))
    return mis, stats


def deterministic_two_ruling_set(g: Graph, config: RunConfig | None = None) -> RulingSetResult:
    config = config or RunConfig()
    n = g.n
    sim = Simulator(config.model(n))
    sim.resident = [1 + len(g.adjacency[v]) for v in range(n)] or [0]
    floor = degree_floor(n, config.degree_floor_const)
    active = set(range(n))
    members: set[int] = set()
    stats: list[IterationStats] = []
    traces, reports = [], []
    delta0 = _max_degree_rounds(sim, g, list(range(n)), "start")
    delta = delta0
    history = [delta0]
    while delta >= floor:
        mark = len(sim.transcript.rounds)
        sub, mapping = induced_subgraph(g, active)
        label = f"iteration {len(stats)}"
        col = _color_rounds(sim, sub, mapping, label)
        coloring_rounds = sim.transcript.rounds_since(mark)
        params = select_parameters(
            n, delta, config.epsilon, config.c,
            domain_size=col.palette_size, k=config.k, w_exponent=config.w_exponent,
        )
        report = check_precondition(sub, col, params, config.budget)
        reports.append(report)
        if not report.ok:
            raise PreconditionFailed(report)
        schedule = ChunkSchedule.for_graph(n, params, config.chunk_bits)
        seed, trace = distributed_fix_seed(sim, sub, col, params, schedule, mapping, config.budget)
        traces.append(trace)
        state = psi_of_seed(sub, col, params, seed)
        if state.bad_count:
            raise AssertionError("fixed seed left a high-degree vertex unhit despite E[psi] < W")
        got = gather_subgraph(sim, sub, state.selected, sim.config.coordinator, mapping)
        mis_local = greedy_mis(got.graph)
        mis = sorted(got.mapping[i] for i in mis_local)  # indices of sub
        w = sim.config.coordinator
        sim.exchange({w: {mapping[v]: [1] for v in mis}}, label=f"{label}: announce I")
        alive = set(range(sub.n))
        _notify_neighbors(sim, sub, mis, mapping, alive, f"{label}: I notifies")
        high = {v for v in range(sub.n) if len(sub.adjacency[v]) >= params.degree_threshold}
        closed = set(mis)
        for v in mis:
            closed.update(sub.adjacency[v])
        removed = closed | high
        left = alive - removed
        _notify_neighbors(sim, sub, removed - set(mis), mapping, left, f"{label}: deactivate")
        members.update(mapping[v] for v in mis)
        active -= {mapping[v] for v in removed}
        rest, rest_map = induced_subgraph(g, active)
        new_delta = _max_degree_rounds(sim, rest, rest_map, label)
        stats.append(
            IterationStats(
                delta=delta, f=params.f, threshold=params.degree_threshold, k=params.k,
                seed_bits=params.seed_bits, chunks=schedule.t, palette=col.palette_size,
                seed=seed.hex(), expected_psi=report.expected_psi, z_size=len(state.selected),
                z_edges=state.edges_in_z, h_size=len(high), i_size=len(mis),
                coloring_rounds=coloring_rounds, rounds=sim.transcript.rounds_since(mark),
            )
        )
        delta = new_delta
        history.append(delta)
    rest, rest_map = induced_subgraph(g, active)
    mis, fb = fallback_mis(rest, config, sim, rest_map)
    members.update(rest_map[v] for v in mis)
    return RulingSetResult(
        members=tuple(sorted(members)),
        delta0=delta0,
        degree_floor=floor,
        iterations=len(stats),
        stats=stats,
        fallback=fb,
        total_rounds=sim.transcript.total_rounds,
        transcript=sim.transcript,
        traces=traces,
        reports=reports,
        degree_history=history,
    )
