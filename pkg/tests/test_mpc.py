import pytest

from helpers import complete, path
from rulingset.errors import BandwidthViolation, CapacityViolation, InvalidInput
from rulingset.mpc import ModelConfig, Simulator, gather_subgraph, run_program


def broadcast_program(machine, state, inbox, rnd):
    if rnd == 0 and machine == 0:
        return state, {m: [7] for m in range(1, 8)}, True
    return state + [w for _, words in inbox for w in words], {}, True


@pytest.mark.parametrize("config", [ModelConfig.mpc_linear(8), ModelConfig.congested_clique(8)])
def test_broadcast_is_one_round(config):
    states, transcript = run_program(config, broadcast_program, [[] for _ in range(8)])
    assert transcript.total_rounds == 1
    assert transcript.rounds[0].sent[0] == 7
    assert states[1:] == [[7]] * 7


def test_noop_program():
    _, transcript = run_program(ModelConfig.mpc_linear(4), lambda m, s, i, r: (s, {}, True), [0] * 4)
    assert transcript.total_rounds == 0 and transcript.rounds == []


def test_memory_is_linear():
    cfg = ModelConfig.mpc_linear(100)
    assert cfg.memory_words == 4 * 100 * 7
    assert ModelConfig.mpc_linear(100, memory_const=1).memory_words == 700


def test_over_send_raises_capacity_violation():
    cfg = ModelConfig.mpc_linear(4, memory_const=1)
    S = cfg.memory_words

    def flood(machine, state, inbox, rnd):
        return state, ({1: list(range(S + 1))} if machine == 0 and rnd == 0 else {}), True

    for _ in range(2):
        with pytest.raises(CapacityViolation) as err:
            run_program(cfg, flood, [None] * 4)
        assert (err.value.round_index, err.value.machine, err.value.words) == (0, 0, S + 1)


def test_clique_pair_cap():
    sim = Simulator(ModelConfig.congested_clique(4))
    with pytest.raises(BandwidthViolation) as err:
        sim.exchange({2: {3: [1, 2]}})
    assert err.value.machine == 2 and err.value.words == 2


def test_self_messages_are_free():
    sim = Simulator(ModelConfig.congested_clique(3))
    inbox = sim.exchange({1: {1: [1, 2, 3], 2: [4]}})
    assert inbox[1] == [(1, [1, 2, 3])]
    assert sim.transcript.rounds[0].sent == (0, 1, 0)


def test_inbox_sorted_by_sender_and_conservation():
    sim = Simulator(ModelConfig.mpc_linear(5))
    inbox = sim.exchange({4: {0: [4]}, 2: {0: [2]}, 3: {0: [3, 3]}})
    assert [s for s, _ in inbox[0]] == [2, 3, 4]
    r = sim.transcript.rounds[0]
    assert sum(r.sent) == sum(r.received) == 4


def test_bad_machine_ids():
    with pytest.raises(InvalidInput):
        Simulator(ModelConfig.mpc_linear(3)).exchange({5: {0: [1]}})


def test_gather_empty_set_costs_one_round():
    sim = Simulator(ModelConfig.mpc_linear(6))
    got = gather_subgraph(sim, path(6), set(), 0)
    assert got.words == 0 and got.rounds == 1 and got.graph.n == 0


def test_gather_rebuilds_induced_subgraph():
    g = complete(6)
    sim = Simulator(ModelConfig.mpc_linear(6))
    got = gather_subgraph(sim, g, {1, 3, 4}, 0)
    assert got.mapping == (1, 3, 4) and got.graph.m == 3
    assert got.words == 3 + 3


def test_gather_in_clique_costs_lenzen_rounds():
    sim = Simulator(ModelConfig.congested_clique(6, lenzen_rounds=2))
    got = gather_subgraph(sim, complete(6), range(6), 0)
    # 6 vertex words and 15 edge words; the target's own 6 words stay local,
    # so 15 words arrive: 2 * ceil(15 / 6) rounds.
    assert got.rounds == 6
    assert got.graph == complete(6)
    assert not sim.transcript.violations()


def test_gather_dense_graph_overflows():
    g = complete(40)
    sim = Simulator(ModelConfig.mpc_linear(40, memory_const=1))
    assert g.m > sim.config.memory_words
    with pytest.raises(CapacityViolation):
        gather_subgraph(sim, g, range(40), 0)


def test_gather_sparse_sample_fits():
    n = 64
    g = complete(11)
    sim = Simulator(ModelConfig.mpc_linear(n))
    got = gather_subgraph(sim, g, range(11), 0)
    assert got.graph.m == 55 <= n


def test_transcript_replay_and_jsonl_are_stable():
    def run():
        sim = Simulator(ModelConfig.mpc_linear(5))
        sim.exchange({0: {m: [1] for m in range(5)}}, label="hello")
        return sim.transcript

    a, b = run(), run()
    assert a.to_jsonl() == b.to_jsonl()
    assert a.violations() == []
    assert a.summary()["total_words"] == 4
