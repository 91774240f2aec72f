"""Graph families for experiments. Randomized ones take an explicit seed."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput
from .graph import Graph


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise InvalidInput("grid needs positive dimensions")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def gnp_capped(n: int, p: float, cap: int, seed: int) -> Graph:
    """G(n, p) with pairs visited in lexicographic order, skipping any edge
    that would push an endpoint past degree ``cap``."""
    if n < 1 or not 0 <= p <= 1 or cap < 0:
        raise InvalidInput("need n >= 1, 0 <= p <= 1, cap >= 0")
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    deg = [0] * n
    edges = []
    for u, v in zip(iu[keep].tolist(), iv[keep].tolist()):
        if deg[u] < cap and deg[v] < cap:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return Graph(n, edges)


def regular_ish(n: int, d: int, seed: int) -> Graph:
    """Random stub matching; loops and repeated pairs are dropped, so degrees are at most ``d``."""
    if n < 1 or d < 0 or d >= n:
        raise InvalidInput("need n >= 1 and 0 <= d < n")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    rng.shuffle(stubs)
    pairs = stubs[: len(stubs) - len(stubs) % 2].reshape(-1, 2)
    edges = {(min(u, v), max(u, v)) for u, v in pairs.tolist() if u != v}
    return Graph(n, sorted(edges))


def star_cluster(hubs: int, degree: int, seed: int | None = None) -> Graph:
    """``hubs`` stars with ``degree`` leaves each, chained by leaf-to-leaf bridges.

    Hub ``j`` is vertex ``j * (degree + 1)``. The first leaf of each star is
    joined to the last leaf of the next one, so leaves have degree at most 2
    and the maximum degree is ``degree`` whenever ``degree >= 2``. With a seed,
    vertex identifiers are shuffled.
    """
    if hubs < 1 or degree < 1:
        raise InvalidInput("need at least one hub of positive degree")
    size = degree + 1
    edges = []
    for j in range(hubs):
        hub = j * size
        edges.extend((hub, hub + i) for i in range(1, size))
        if j + 1 < hubs and degree >= 2:
            edges.append((hub + 1, (j + 1) * size + degree))
    n = hubs * size
    if seed is not None:
        perm = np.random.default_rng(seed).permutation(n).tolist()
        edges = [(perm[u], perm[v]) for u, v in edges]
    return Graph(n, edges)


KINDS = ("gnp-capped", "regular-ish", "star-cluster", "grid")


def disjoint_union(*graphs: Graph) -> Graph:
    """Side-by-side copy; the vertices of the ``i``-th graph follow those of earlier ones."""
    edges, offset = [], 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, edges)
