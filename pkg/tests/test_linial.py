import math

import pytest

from helpers import cycle, path
from rulingset import generators
from rulingset.errors import InvalidInput, NotProper
from rulingset.graph import Coloring, Graph, identity_coloring, max_degree, validate_coloring
from rulingset.linial import (
    fixpoint_steps,
    is_prime,
    linial_parameters,
    linial_reduce,
    linial_vertex_color,
    next_prime,
    reduce_to_fixpoint,
)


def test_primes():
    small = [p for p in range(2, 100) if all(p % d for d in range(2, p))]
    assert [p for p in range(100) if is_prime(p)] == small
    assert next_prime(24) == 29 and next_prime(2) == 2


def test_isolated_vertex_takes_first_candidate():
    out = linial_reduce(Graph(1), Coloring(1, (0,)), t=1, q=3)
    assert out.color == (0,) and out.palette_size == 9


def test_single_edge_becomes_proper_with_q_above_delta_t():
    g = Graph(2, [(0, 1)])
    t, q = linial_parameters(1, 2)
    assert q > t and is_prime(q)
    out = linial_reduce(g, Coloring(2, (0, 1)))
    assert validate_coloring(g, out) and out.palette_size == q * q


def test_inadmissible_parameters_rejected():
    with pytest.raises(InvalidInput):
        linial_reduce(path(3), Coloring(3, (0, 1, 2)), t=1, q=2)


def test_improper_input_rejected():
    with pytest.raises(NotProper):
        linial_reduce(path(2), Coloring(1, (0, 0)))


def test_parameters_are_the_smallest_admissible_prime():
    for delta in range(1, 12):
        for palette in (2, 10, 50, 256, 1000, 5000):
            t, q = linial_parameters(delta, palette)
            t_max = max(1, math.ceil(math.log(palette) / math.log(delta + 1) - 1e-12))
            best = min(
                p
                for tt in range(1, t_max + 1)
                for p in range(delta * tt + 1, 4 * palette + 4 * delta * tt + 10)
                if is_prime(p) and p ** (tt + 1) >= palette
            )
            assert q == best and q > delta * t and q ** (t + 1) >= palette


def test_identity_coloring_on_n256_delta4_stops_at_121():
    g = Graph(256, [(i, (i + 1) % 256) for i in range(256)] + [(i, (i + 7) % 256) for i in range(256)])
    assert max_degree(g) == 4
    steps = fixpoint_steps(g, identity_coloring(g))
    assert [s.palette_size for s in steps] == [256, 121]
    assert validate_coloring(g, steps[-1])
    # Linear polynomials (t = 1) need q >= 16 to cover 256 colors; quadratics with
    # q = 11 give 121. Palette 25 would need q = 5, below 256 ** (1/3).
    assert linial_parameters(4, 256) == (2, 11)
    assert linial_parameters(4, 121)[1] == 11


def test_fixpoint_unchanged_when_minimal():
    g = cycle(6)
    col = reduce_to_fixpoint(g, identity_coloring(g))
    assert reduce_to_fixpoint(g, col) == col


def test_edgeless_graph_collapses_to_one_color():
    g = Graph(7)
    assert reduce_to_fixpoint(g, identity_coloring(g)) == Coloring(1, (0,) * 7)


@pytest.mark.parametrize("seed", range(8))
def test_reduction_is_proper_and_local(seed):
    g = generators.gnp_capped(120, 0.08, 9, seed)
    col = identity_coloring(g)
    t, q = linial_parameters(max_degree(g), col.palette_size)
    out = linial_reduce(g, col)
    assert validate_coloring(g, out)
    for v in range(g.n):
        nbr = [col.color[w] for w in g.adjacency[v]]
        assert out.color[v] == linial_vertex_color(col.color[v], nbr, q, t)


@pytest.mark.parametrize("seed", range(5))
def test_palette_never_grows_along_fixpoint(seed):
    g = generators.regular_ish(200, 6, seed)
    steps = fixpoint_steps(g, identity_coloring(g))
    sizes = [s.palette_size for s in steps]
    assert all(a > b for a, b in zip(sizes, sizes[1:]))
    assert all(validate_coloring(g, s) for s in steps)
