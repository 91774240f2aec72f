"""Round-accurate simulation of linear-memory MPC and the Congested Clique.

Only communication is metered: rounds, words per machine per round, and the
memory a machine holds while receiving. Local computation is free.

A *word* is one integer of ``O(log n)`` bits. Messages are lists of words.
Messages a machine sends to itself are delivered but not counted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import BandwidthViolation, CapacityViolation, InvalidInput, ModelViolation
from .graph import Graph, vertex_set

MPC = "mpc"
CLIQUE = "clique"


@dataclass(frozen=True)
class ModelConfig:
    """Model parameters; build with :meth:`mpc_linear` or :meth:`congested_clique`.

    In MPC mode ``memory_words`` is ``S = ceil(memory_const * n * log2 n)``.
    In Congested Clique mode there is no memory cap and each ordered pair of
    machines may exchange ``pair_cap`` words per round.
    """

    mode: str
    n: int
    machine_count: int
    memory_const: float = 4.0
    lenzen_rounds: int = 2
    coordinator: int = 0

    def __post_init__(self):
        if self.mode not in (MPC, CLIQUE):
            raise InvalidInput(f"unknown model {self.mode!r}")
        if self.machine_count < 1:
            raise InvalidInput("need at least one machine")
        if self.mode == CLIQUE and self.machine_count != max(self.n, 1):
            raise InvalidInput("the Congested Clique has exactly one machine per vertex")
        if not 0 <= self.coordinator < self.machine_count:
            raise InvalidInput("coordinator is not a machine")
        if self.lenzen_rounds < 1:
            raise InvalidInput("routing needs at least one round")

    @classmethod
    def mpc_linear(cls, n: int, memory_const: float = 4.0, machine_count: int | None = None):
        return cls(MPC, n, machine_count or max(n, 1), memory_const=memory_const)

    @classmethod
    def congested_clique(cls, n: int, lenzen_rounds: int = 2):
        return cls(CLIQUE, n, max(n, 1), lenzen_rounds=lenzen_rounds)

    @property
    def log_n(self) -> int:
        return max(1, math.ceil(math.log2(max(self.n, 2))))

    @property
    def memory_words(self) -> int | None:
        if self.mode != MPC:
            return None
        return math.ceil(self.memory_const * max(self.n, 1) * self.log_n)

    @property
    def pair_cap(self) -> int | None:
        return 1 if self.mode == CLIQUE else None

    @property
    def word_bits(self) -> int:
        return self.log_n

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "machine_count": self.machine_count,
            "memory_words": self.memory_words,
            "pair_cap": self.pair_cap,
            "word_bits": self.word_bits,
            "lenzen_rounds": self.lenzen_rounds,
        }


@dataclass(frozen=True)
class RoundRecord:
    index: int
    label: str
    span: int
    sent: tuple[int, ...]
    received: tuple[int, ...]
    memory: tuple[int, ...]
    max_pair: int
    routed: bool = False

    def as_dict(self) -> dict:
        return {
            "type": "round",
            "index": self.index,
            "label": self.label,
            "span": self.span,
            "sent": list(self.sent),
            "received": list(self.received),
            "memory": list(self.memory),
            "max_pair": self.max_pair,
            "routed": self.routed,
        }


@dataclass
class SimTranscript:
    config: ModelConfig
    rounds: list[RoundRecord] = field(default_factory=list)

    @property
    def total_rounds(self) -> int:
        return sum(r.span for r in self.rounds)

    def rounds_since(self, mark: int) -> int:
        return sum(r.span for r in self.rounds[mark:])

    def violations(self) -> list[str]:
        """Replay every record against the model caps."""
        out = []
        cap = self.config.memory_words
        pair = self.config.pair_cap
        for r in self.rounds:
            if sum(r.sent) != sum(r.received):
                out.append(f"round {r.index}: sent {sum(r.sent)} != received {sum(r.received)}")
            if cap is not None:
                for m in range(len(r.sent)):
                    if r.sent[m] > cap or r.received[m] > cap or r.memory[m] > cap:
                        out.append(f"round {r.index}: machine {m} over S={cap}")
            if pair is not None and not r.routed and r.max_pair > pair:
                out.append(f"round {r.index}: {r.max_pair} words on one link")
        return out

    def summary(self) -> dict:
        return {
            "type": "summary",
            "model": self.config.as_dict(),
            "total_rounds": self.total_rounds,
            "records": len(self.rounds),
            "total_words": sum(sum(r.sent) for r in self.rounds),
            "max_sent": max((max(r.sent) for r in self.rounds), default=0),
            "max_received": max((max(r.received) for r in self.rounds), default=0),
            "max_memory": max((max(r.memory) for r in self.rounds), default=0),
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps(r.as_dict(), sort_keys=True) for r in self.rounds]
        lines.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(lines) + "\n"


class Simulator:
    """Delivers messages round by round and enforces the model's caps.

    ``resident`` holds the words each machine keeps between rounds; its memory
    in a round is that plus the words it receives.
    """

    def __init__(self, config: ModelConfig):
        self.config = config
        self.transcript = SimTranscript(config)
        self.resident = [0] * config.machine_count

    def _check_ids(self, outboxes):
        count = self.config.machine_count
        for src, out in outboxes.items():
            if not 0 <= src < count:
                raise InvalidInput(f"sender {src} is not a machine")
            for dst in out:
                if not 0 <= dst < count:
                    raise InvalidInput(f"destination {dst} is not a machine")

    def _deliver(self, outboxes, label, span, enforce_pairs):
        cfg = self.config
        self._check_ids(outboxes)
        index = len(self.transcript.rounds)
        count = cfg.machine_count
        sent = [0] * count
        received = [0] * count
        inbox: dict[int, list] = {}
        max_pair = 0
        for src in sorted(outboxes):
            for dst in sorted(outboxes[src]):
                words = outboxes[src][dst]
                if isinstance(words, int):
                    words = [words]
                else:
                    words = list(words)
                inbox.setdefault(dst, []).append((src, words))
                if src == dst:
                    continue
                w = len(words)
                max_pair = max(max_pair, w)
                if enforce_pairs and cfg.pair_cap is not None and w > cfg.pair_cap:
                    raise BandwidthViolation(
                        f"round {index}: machine {src} sent {w} words to {dst}, cap {cfg.pair_cap}",
                        index, src, w,
                    )
                sent[src] += w
                received[dst] += w
        memory = [self.resident[m] + received[m] for m in range(count)]
        cap = cfg.memory_words
        if cap is not None:
            # Over-senders are blamed before the machines they flood.
            for what, values in (("sent", sent), ("received", received), ("holds", memory)):
                for m, value in enumerate(values):
                    if value > cap:
                        raise CapacityViolation(
                            f"round {index}: machine {m} {what} {value} words, S={cap}",
                            index, m, value,
                        )
        self.transcript.rounds.append(
            RoundRecord(
                index, label, span, tuple(sent), tuple(received), tuple(memory), max_pair,
                routed=not enforce_pairs,
            )
        )
        return inbox

    def exchange(self, outboxes, label: str = "") -> dict[int, list]:
        """One synchronous round; ``outboxes[src][dst]`` is a list of words.

        Returns ``inbox[dst]`` as ``(src, words)`` pairs sorted by sender.
        """
        return self._deliver(outboxes, label, 1, enforce_pairs=True)

    def route(self, outboxes, label: str = "route") -> dict[int, list]:
        """Deliver arbitrary traffic through the constant-round routing primitive.

        MPC: a single ordinary round. Congested Clique: ``lenzen_rounds`` rounds
        for every ``n`` words of the heaviest per-machine send or receive load.
        """
        cfg = self.config
        if cfg.mode == MPC:
            return self._deliver(outboxes, label, 1, enforce_pairs=False)
        load = {}
        for src, out in outboxes.items():
            for dst, words in out.items():
                if src == dst:
                    continue
                w = 1 if isinstance(words, int) else len(words)
                load[("s", src)] = load.get(("s", src), 0) + w
                load[("r", dst)] = load.get(("r", dst), 0) + w
        heaviest = max(load.values(), default=0)
        span = cfg.lenzen_rounds * max(1, -(-heaviest // max(cfg.n, 1)))
        return self._deliver(outboxes, label, span, enforce_pairs=False)


def run_program(config: ModelConfig, programs, inputs, max_steps: int = 100_000):
    """Run one program per machine in lock-step rounds.

    ``programs`` is a single callable or one per machine, called as
    ``program(machine, state, inbox, round_index) -> (state, outbox, halted)``
    where ``outbox`` maps destination machines to word lists. The run ends
    at the first step in which every machine halts and nothing is sent; that
    step's local computation is not a round.
    """
    count = config.machine_count
    if callable(programs):
        programs = [programs] * count
    if len(programs) != count or len(inputs) != count:
        raise InvalidInput(f"need {count} programs and inputs")
    sim = Simulator(config)
    states = list(inputs)
    inbox: dict[int, list] = {}
    for step in range(max_steps):
        outboxes = {}
        halted = True
        for m in range(count):
            states[m], out, done = programs[m](m, states[m], inbox.get(m, []), step)
            halted = halted and done
            if out:
                outboxes[m] = out
        if not outboxes and halted:
            return states, sim.transcript
        inbox = sim.exchange(outboxes, label=f"step {step}")
    raise ModelViolation(f"program did not halt within {max_steps} steps")


@dataclass(frozen=True)
class GatherResult:
    rounds: int
    words: int
    graph: Graph
    mapping: tuple[int, ...]


def gather_subgraph(sim: Simulator, g: Graph, s, target: int, machine_of=None) -> GatherResult:
    """Ship ``G[s]`` to machine ``target``: one word per member, one per edge.

    The target rebuilds the subgraph from what it actually received.
    ``machine_of`` maps vertices of ``g`` to machines (identity by default).
    """
    members = sorted(vertex_set(g, s))
    if machine_of is None:
        machine_of = list(range(g.n))
    inside = set(members)
    n = max(g.n, 1)
    outboxes: dict[int, dict[int, list]] = {}
    # Words below n are vertex ids; an edge (v, w) travels as n + v*n + w.
    for v in members:
        words = [v] + [n + v * n + w for w in g.adjacency[v] if w > v and w in inside]
        outboxes.setdefault(machine_of[v], {}).setdefault(target, []).extend(words)
    mark = len(sim.transcript.rounds)
    inbox = sim.route(outboxes, label="gather")
    got_vertices, got_edges = [], []
    for _, words in inbox.get(target, []):
        for wd in words:
            if wd < n:
                got_vertices.append(wd)
            else:
                got_edges.append(divmod(wd - n, n))
    mapping = tuple(sorted(got_vertices))
    index = {v: i for i, v in enumerate(mapping)}
    rebuilt = Graph(len(mapping), [(index[u], index[w]) for u, w in got_edges])
    words = sum(len(w) for out in outboxes.values() for w in out.values())
    return GatherResult(sim.transcript.rounds_since(mark), words, rebuilt, mapping)
