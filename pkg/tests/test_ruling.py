import pytest

from helpers import cycle, path, star
from rulingset import generators
from rulingset.errors import PreconditionFailed
from rulingset.graph import Coloring, Graph, is_maximal_independent_set, is_two_ruling_set
from rulingset.ruling import (
    RunConfig,
    degree_floor,
    deterministic_two_ruling_set,
    fallback_mis,
    greedy_mis,
    iteration_cap,
)

DESK = dict(k=2, degree_floor_const=0)


def test_greedy_examples():
    assert greedy_mis(Graph(3, [(0, 1), (1, 2), (0, 2)])) == {0}
    assert greedy_mis(path(3)) == {0, 2}
    assert greedy_mis(Graph(3)) == {0, 1, 2}


def test_floor_and_cap():
    assert degree_floor(4) == 16
    assert degree_floor(5) == 30  # ceil(log2(5)^4) = ceil(28.97)
    assert degree_floor(512) == 6561
    assert degree_floor(512, 0) == 16
    assert iteration_cap(2) == 2
    assert iteration_cap(256) == 14  # log2 256 = 8, log_{1.2} 8 = 11.4


def test_five_cycle_uses_fallback():
    r = deterministic_two_ruling_set(cycle(5))
    assert r.iterations == 0 and r.members == (0, 2)
    assert is_two_ruling_set(cycle(5), r.members)


def test_edgeless_graph_takes_everything():
    r = deterministic_two_ruling_set(Graph(6))
    assert r.members == tuple(range(6))


def test_empty_graph():
    assert deterministic_two_ruling_set(Graph(0)).members == ()


@pytest.mark.parametrize("mode", ["mpc", "clique"])
def test_big_star_enters_loop(mode):
    g = star(40)
    r = deterministic_two_ruling_set(g, RunConfig(mode=mode, **DESK))
    assert r.iterations == 1 and is_two_ruling_set(g, r.members)
    assert r.stats[0].h_size == 1
    assert not r.transcript.violations()


def test_fallback_strategies():
    c4 = cycle(4)
    mis, stats = fallback_mis(c4, RunConfig(fallback="sweep"), coloring=Coloring(2, (0, 1, 0, 1)))
    assert mis == {0, 2} and stats.strategy == "sweep" and stats.rounds == 2
    mis, stats = fallback_mis(path(3), RunConfig(fallback="gather"))
    assert mis == {0, 2} and stats.strategy == "gather"


@pytest.mark.parametrize("seed", range(4))
def test_both_fallbacks_give_an_mis(seed):
    g = generators.gnp_capped(60, 0.1, 6, seed)
    for strategy in ("gather", "sweep"):
        mis, _ = fallback_mis(g, RunConfig(fallback=strategy))
        assert is_maximal_independent_set(g, mis)


def test_gather_falls_back_to_sweep_when_memory_is_short():
    g = generators.regular_ish(60, 12, 0)
    mis, stats = fallback_mis(g, RunConfig(fallback="gather", memory_const=0.5))
    assert stats.strategy == "sweep" and is_maximal_independent_set(g, mis)


def test_precondition_failure_aborts_with_report():
    g = generators.gnp_capped(200, 0.2, 24, 3)
    with pytest.raises(PreconditionFailed) as err:
        deterministic_two_ruling_set(g, RunConfig(**DESK))
    rep = err.value.report
    assert not rep.ok and rep.expected_psi >= rep.weight


def test_two_iterations_on_mixed_degrees():
    g = generators.disjoint_union(generators.star_cluster(2, 100, 1), generators.regular_ish(200, 30, 1))
    r = deterministic_two_ruling_set(g, RunConfig(**DESK))
    assert r.iterations == 2 and is_two_ruling_set(g, r.members)
    deltas = [s.delta for s in r.stats]
    assert deltas[1] ** 6 <= deltas[0] ** 5


def test_round_accounting_adds_up():
    g = generators.star_cluster(4, 30, 3)
    r = deterministic_two_ruling_set(g, RunConfig(**DESK))
    s = r.stats[0]
    assert r.total_rounds == 2 + s.rounds + r.fallback.rounds
    assert r.total_rounds == r.transcript.total_rounds
