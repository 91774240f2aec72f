"""One-round Linial color reduction with polynomials over a prime field.

A vertex with old color ``c`` reads the base-``q`` digits of ``c`` as the
coefficients of a polynomial ``p`` of degree at most ``t`` over GF(q). Its
candidate colors are the pairs ``(x, p(x))``; it keeps the smallest ``x`` whose
pair is not a candidate of any neighbor. Two distinct polynomials agree on at
most ``t`` points, so ``q > Delta * t`` always leaves a free candidate.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidInput, NotProper
from .graph import Coloring, Graph, max_degree, validate_coloring


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    return all(q % d for d in range(3, math.isqrt(q) + 1, 2))


def next_prime(at_least: int) -> int:
    """Smallest prime ``>= at_least``."""
    q = max(2, at_least)
    while not is_prime(q):
        q += 1
    return q


def _iroot_ceil(x: int, e: int) -> int:
    """Smallest ``r`` with ``r**e >= x``."""
    r = max(1, round(x ** (1.0 / e)))
    while r**e < x:
        r += 1
    while r > 1 and (r - 1) ** e >= x:
        r -= 1
    return r


def linial_parameters(delta: int, palette: int) -> tuple[int, int]:
    """Pick ``(t, q)`` giving the smallest new palette ``q*q``.

    Admissible pairs have ``q`` prime, ``q > delta*t`` and ``q**(t+1) >= palette``.
    The search covers ``t = 1 .. max(1, ceil(log(palette) / log(delta+1)))``.
    """
    if delta <= 0:
        t_max = 1
    else:
        t_max = max(1, math.ceil(math.log(max(palette, 1)) / math.log(delta + 1) - 1e-12))
    best = None
    for t in range(1, t_max + 1):
        q = next_prime(max(delta * t + 1, _iroot_ceil(palette, t + 1)))
        if best is None or q < best[1]:
            best = (t, q)
    return best


def _digits(colors: np.ndarray, q: int, t: int) -> np.ndarray:
    out = np.empty((colors.shape[0], t + 1), dtype=np.int64)
    rest = colors.copy()
    for i in range(t + 1):
        out[:, i] = rest % q
        rest //= q
    return out


def _poly_table(colors: np.ndarray, q: int, t: int) -> np.ndarray:
    """``table[v, x] = p_v(x) mod q`` for every vertex and every ``x`` in GF(q)."""
    coeffs = _digits(colors, q, t)
    xs = np.arange(q, dtype=np.int64)
    acc = np.zeros((colors.shape[0], q), dtype=np.int64)
    for i in range(t, -1, -1):
        acc = (acc * xs[None, :] + coeffs[:, i : i + 1]) % q
    return acc


def linial_vertex_color(own: int, neighbor_colors, q: int, t: int) -> int:
    """New color of one vertex from its own and its neighbors' old colors."""

    def poly(c):
        digits = [(c // q**i) % q for i in range(t + 1)]
        return [sum(d * x**i for i, d in enumerate(digits)) % q for x in range(q)]

    mine = poly(own)
    taken = [False] * q
    for c in set(neighbor_colors):
        for x, y in enumerate(poly(c)):
            if y == mine[x]:
                taken[x] = True
    for x in range(q):
        if not taken[x]:
            return x * q + mine[x]
    raise NotProper(f"no free candidate for color {own}")


def linial_reduce(g: Graph, col: Coloring, t: int | None = None, q: int | None = None) -> Coloring:
    """One communication round of color reduction; returns a ``q*q`` coloring."""
    if not validate_coloring(g, col):
        raise NotProper("input coloring has a monochromatic edge")
    delta = max_degree(g)
    if t is None or q is None:
        t, q = linial_parameters(delta, col.palette_size)
    if not is_prime(q) or q <= delta * t or q ** (t + 1) < col.palette_size:
        raise InvalidInput(f"q={q}, t={t} inadmissible for delta={delta}, palette={col.palette_size}")
    if g.n == 0:
        return Coloring(q * q, ())
    table = _poly_table(col.array(), q, t)
    new = np.empty(g.n, dtype=np.int64)
    for v in range(g.n):
        nbrs = g.adjacency[v]
        if nbrs:
            taken = (table[list(nbrs)] == table[v]).any(axis=0)
            x = int(np.argmin(taken))
            if taken[x]:
                raise NotProper(f"vertex {v} has no free candidate")
        else:
            x = 0
        new[v] = x * q + table[v, x]
    return Coloring(q * q, tuple(new.tolist()))


def fixpoint_steps(g: Graph, col: Coloring) -> list[Coloring]:
    """Colorings produced by repeated reduction while the palette shrinks.

    The first entry is ``col`` itself; every further entry costs one round.
    An edgeless graph collapses to the one-color palette in one step.
    """
    steps = [col]
    if g.n and max_degree(g) == 0:
        if col.palette_size > 1:
            steps.append(Coloring(1, (0,) * g.n))
        return steps
    if not validate_coloring(g, col):
        raise NotProper("input coloring has a monochromatic edge")
    while True:
        nxt = linial_reduce(g, steps[-1])
        if nxt.palette_size >= steps[-1].palette_size:
            return steps
        steps.append(nxt)


def reduce_to_fixpoint(g: Graph, col: Coloring) -> Coloring:
    return fixpoint_steps(g, col)[-1]
