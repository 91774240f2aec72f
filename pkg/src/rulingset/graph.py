"""Undirected simple graphs, colorings and the structural checks built on them.

Vertices are the dense integers ``0..n-1``. Files may use arbitrary labels;
:func:`read_edge_list` remaps them and keeps the original labels on the graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidInput, InvalidVertex


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "adjacency", "labels", "_arrays")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels=None):
        if n < 0:
            raise InvalidInput(f"negative vertex count {n}")
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidVertex(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise InvalidInput(f"self-loop at {u}")
            canon.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges = tuple(sorted(canon))
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.adjacency = tuple(tuple(sorted(a)) for a in nbrs)
        self.labels = tuple(labels) if labels is not None else None
        self._arrays = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoints of every edge as two int arrays, smaller endpoint first."""
        if self._arrays is None:
            if self.edges:
                arr = np.asarray(self.edges, dtype=np.int64)
                self._arrays = (arr[:, 0].copy(), arr[:, 1].copy())
            else:
                empty = np.zeros(0, dtype=np.int64)
                self._arrays = (empty, empty)
        return self._arrays

    def label(self, v: int):
        return self.labels[v] if self.labels is not None else v

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Coloring:
    palette_size: int
    color: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "color", tuple(int(c) for c in self.color))
        if self.palette_size < 1:
            raise InvalidInput("palette_size must be positive")
        for c in self.color:
            if not 0 <= c < self.palette_size:
                raise InvalidInput(f"color {c} outside palette [0, {self.palette_size})")

    def __len__(self):
        return len(self.color)

    def array(self) -> np.ndarray:
        return np.asarray(self.color, dtype=np.int64)


def identity_coloring(g: Graph) -> Coloring:
    """Color every vertex by its identifier."""
    return Coloring(max(g.n, 1), tuple(range(g.n)))


def vertex_set(g: Graph, members: Iterable[int]) -> frozenset[int]:
    """Validate ``members`` against ``g`` and return them as a frozenset."""
    out = frozenset(int(v) for v in members)
    for v in out:
        if not 0 <= v < g.n:
            raise InvalidVertex(f"vertex {v} outside 0..{g.n - 1}")
    return out


def max_degree(g: Graph) -> int:
    return max((len(a) for a in g.adjacency), default=0)


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Return ``G[s]`` relabelled to ``0..|s|-1`` plus the map back to ``g``.

    The mapping is sorted, so ``mapping[i]`` is the i-th smallest member of ``s``.
    """
    mapping = tuple(sorted(vertex_set(g, s)))
    index = {v: i for i, v in enumerate(mapping)}
    edges = [
        (index[u], index[v]) for u, v in g.edges if u in index and v in index
    ]
    labels = None
    if g.labels is not None:
        labels = [g.labels[v] for v in mapping]
    return Graph(len(mapping), edges, labels=labels), mapping


def validate_coloring(g: Graph, col: Coloring) -> bool:
    """True iff no edge of ``g`` is monochromatic under ``col``."""
    if len(col) != g.n:
        raise InvalidInput(f"coloring has {len(col)} entries for {g.n} vertices")
    c = col.color
    return all(c[u] != c[v] for u, v in g.edges)


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    return first_dependent_edge(g, s) is None


def first_dependent_edge(g: Graph, s: Iterable[int]):
    members = vertex_set(g, s)
    for u, v in g.edges:
        if u in members and v in members:
            return (u, v)
    return None


def distances_to(g: Graph, sources: Iterable[int], limit: int | None = None) -> list[int]:
    """Multi-source BFS distances; unreachable (or beyond ``limit``) is -1."""
    dist = [-1] * g.n
    queue = deque()
    for s in vertex_set(g, sources):
        dist[s] = 0
        queue.append(s)
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def first_unruled_vertex(g: Graph, u: Iterable[int], radius: int = 2):
    dist = distances_to(g, u, limit=radius)
    for v, d in enumerate(dist):
        if d < 0:
            return v
    return None


def farthest_unruled_vertex(g: Graph, u: Iterable[int], radius: int = 2):
    """Violator farthest from ``u`` (unreachable counts as farthest); ties go to the smaller id."""
    dist = distances_to(g, u)
    worst, key = None, radius
    for v, d in enumerate(dist):
        d = g.n if d < 0 else d
        if d > key:
            worst, key = v, d
    return worst


def is_two_ruling_set(g: Graph, u: Iterable[int]) -> bool:
    """Independent, and every vertex within distance 2 of some member."""
    members = vertex_set(g, u)
    return is_independent(g, members) and first_unruled_vertex(g, members) is None


def is_maximal_independent_set(g: Graph, s: Iterable[int]) -> bool:
    members = vertex_set(g, s)
    return is_independent(g, members) and first_unruled_vertex(g, members, radius=1) is None


# -- edge-list text format ---------------------------------------------------


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse ``u v`` lines (``#`` comments) into a :class:`Graph`.

    Labels are kept in first-appearance order unless every label is an integer,
    in which case they are sorted numerically. A header comment of the form
    ``# n = <count>`` declares isolated vertices ``0..count-1``.
    """
    pairs = []
    declared = n
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].replace(" ", "")
            if body.startswith("n=") and declared is None:
                try:
                    declared = int(body[2:])
                except ValueError:
                    raise InvalidInput(f"line {lineno}: bad vertex count") from None
            continue
        if not line:
            continue
        line = line.split("#", 1)[0]
        parts = line.split()
        if len(parts) != 2:
            raise InvalidInput(f"line {lineno}: expected 'u v', got {raw!r}")
        pairs.append((parts[0], parts[1]))

    seen: dict[str, None] = {}
    for u, v in pairs:
        seen.setdefault(u)
        seen.setdefault(v)
    names = list(seen)
    if all(_is_int(x) for x in names):
        ints = sorted({int(x) for x in names})
        if declared is not None:
            ints = sorted(set(ints) | set(range(declared)))
        if ints == list(range(len(ints))):
            edges = [(int(u), int(v)) for u, v in pairs]
            return Graph(len(ints), edges)
        index = {x: i for i, x in enumerate(ints)}
        edges = [(index[int(u)], index[int(v)]) for u, v in pairs]
        return Graph(len(ints), edges, labels=ints)
    index = {x: i for i, x in enumerate(names)}
    edges = [(index[u], index[v]) for u, v in pairs]
    return Graph(len(names), edges, labels=names)


def _is_int(s: str) -> bool:
    try:
        int(s)
    except ValueError:
        return False
    return True


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(g: Graph) -> str:
    lines = [f"# n = {g.n}"]
    lines.extend(f"{g.label(u)} {g.label(v)}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))
