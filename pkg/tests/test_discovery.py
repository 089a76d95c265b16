import itertools

import pytest

from dagsep import (
    Dag,
    GenParams,
    NodePair,
    PcConfig,
    SgsConfig,
    empirical_precision,
    generate_random_dag,
    is_d_separated,
    pc_skeleton,
    uniform_sgs_pair,
    uniform_sgs_skeleton,
)
from dagsep import discovery
from dagsep.discovery import pc_candidate_sets, subset_rank_stream
from dagsep.rng import split_seed

CHAIN4 = Dag(4, [(0, 1), (1, 2), (2, 3)])


def true_edge_set(dag):
    return frozenset(NodePair(u, v) for (u, v) in dag.edges())


def test_pc_recovers_chain():
    res = pc_skeleton(CHAIN4, PcConfig())
    assert res.e_pred == true_edge_set(CHAIN4)
    assert res.separators[NodePair(0, 2)] == frozenset({1})
    assert res.separators[NodePair(0, 3)] <= frozenset({1, 2})


def test_pc_cmax_zero_keeps_marginally_connected_pairs():
    # 0 -> 2 <- 1 collider: (0,1) is separated by the empty set even at c_max=0
    collider = Dag(3, [(0, 2), (1, 2)])
    res = pc_skeleton(collider, PcConfig(c_max=0))
    assert res.e_pred == true_edge_set(collider)
    assert res.separators[NodePair(0, 1)] == frozenset()
    # chain needs {1}, so c_max=0 leaves the spurious 0-2 link in place
    chain = Dag(3, [(0, 1), (1, 2)])
    res0 = pc_skeleton(chain, PcConfig(c_max=0))
    assert NodePair(0, 2) in res0.e_pred
    res1 = pc_skeleton(chain, PcConfig(c_max=1))
    assert res1.e_pred == true_edge_set(chain)


def test_pc_exact_on_random_dags():
    for rep in range(60):
        n = 4 + rep % 7
        p1 = (0.3, 0.5)[rep % 2]
        dag = generate_random_dag(GenParams(n, p1, split_seed(601, rep)))
        res = pc_skeleton(dag, PcConfig())
        assert res.e_pred == true_edge_set(dag)
        for pair, sep in res.separators.items():
            assert is_d_separated(dag, pair, sep)


def test_pc_call_counts_monotone_in_cmax():
    for rep in range(15):
        dag = generate_random_dag(GenParams(8, 0.4, split_seed(602, rep)))
        totals = [
            pc_skeleton(dag, PcConfig(c_max=c)).stats.total_calls for c in range(7)
        ]
        assert all(a <= b for a, b in zip(totals, totals[1:]))


def test_pc_complete_graph_exhausts_both_powersets():
    # nothing is removable, so every pair burns through the union of the two
    # side powersets: 2^(n-2) distinct candidate sets
    for n in (6, 8):
        dag = Dag(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
        res = pc_skeleton(dag, PcConfig())
        assert res.e_pred == true_edge_set(dag)
        assert set(res.stats.per_pair_calls.values()) == {2 ** (n - 2)}
        assert res.stats.total_calls == n * (n - 1) // 2 * 2 ** (n - 2)


def test_pc_candidate_sets_order_and_dedup():
    side_x = [1, 2]
    side_y = [2, 3]
    got = list(pc_candidate_sets(side_x, side_y, None, "size_lex_x_first"))
    assert got == [(), (1,), (2,), (3,), (1, 2), (2, 3)]
    capped = list(pc_candidate_sets(side_x, side_y, 1, "size_lex_x_first"))
    assert capped == got[:4]
    flipped = list(pc_candidate_sets(side_x, side_y, 1, "size_lex_y_first"))
    assert flipped == [(), (2,), (3,), (1,)]


def test_pc_pair_order_changes_call_totals_not_answer():
    dag = generate_random_dag(GenParams(9, 0.4, split_seed(603, 3)))
    a = pc_skeleton(dag, PcConfig(pair_order="lex"))
    b = pc_skeleton(dag, PcConfig(pair_order="reverse_lex"))
    assert a.e_pred == b.e_pred == true_edge_set(dag)


def test_pc_full_powerset_flag_counts():
    # with the flag, candidate sides become all of V minus the endpoints, so
    # a complete graph costs the same but a sparse one costs more
    dag = Dag(4, [(0, 1)])
    plain = pc_skeleton(dag, PcConfig())
    full = pc_skeleton(dag, PcConfig(full_powerset=True))
    assert plain.e_pred == full.e_pred == true_edge_set(dag)
    assert full.stats.total_calls >= plain.stats.total_calls


def test_pc_config_validation():
    with pytest.raises(ValueError):
        PcConfig(c_max=-1)
    with pytest.raises(ValueError):
        PcConfig(pair_order="sideways")
    with pytest.raises(ValueError):
        PcConfig(subset_order="alphabetical")


def test_subset_rank_stream_is_seeded_permutation():
    seen = list(subset_rank_stream(8, 99))
    assert sorted(seen) == list(range(256))
    assert seen != list(range(256))
    assert seen == list(subset_rank_stream(8, 99))
    assert seen != list(subset_rank_stream(8, 100))


def test_subset_rank_stream_feistel_regime():
    # force the permutation-network path that normally kicks in above the
    # shuffle threshold, then check it still hits every rank exactly once
    old = discovery.SHUFFLE_MAX_BITS
    discovery.SHUFFLE_MAX_BITS = 4
    try:
        for m, seed in ((5, 1), (6, 2), (7, 3)):
            seen = list(subset_rank_stream(m, seed))
            assert sorted(seen) == list(range(2**m))
    finally:
        discovery.SHUFFLE_MAX_BITS = old


def test_subset_rank_stream_zero_bits():
    assert list(subset_rank_stream(0, 5)) == [0]


def test_sgs_pair_on_chain():
    chain = Dag(3, [(0, 1), (1, 2)])
    res = uniform_sgs_pair(chain, NodePair(0, 2), SgsConfig(seed=5))
    assert res.separator == frozenset({1})
    assert res.calls in (1, 2)


def test_sgs_chain_mean_calls():
    # one of two candidate subsets works, so uniform order needs 1.5 tries
    chain = Dag(3, [(0, 1), (1, 2)])
    total = 0
    reps = 6000
    for s in range(reps):
        total += uniform_sgs_pair(chain, NodePair(0, 2), SgsConfig(seed=s)).calls
    assert abs(total / reps - 1.5) < 0.03


def test_sgs_adjacent_pair_exhausts_uncapped():
    d = Dag(3, [(0, 1)])
    res = uniform_sgs_pair(d, NodePair(0, 1), SgsConfig(seed=9, call_cap=None))
    assert res.separator is None
    assert res.calls == 2  # both subsets of {2} tried


def test_sgs_call_cap_stops_early():
    n = 12
    dag = Dag(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
    res = uniform_sgs_pair(dag, NodePair(0, 1), SgsConfig(seed=4, call_cap=100))
    assert res.separator is None
    assert res.calls == 100


def test_sgs_skeleton_exact_and_deterministic():
    for rep in range(30):
        dag = generate_random_dag(GenParams(7, 0.4, split_seed(604, rep)))
        a = uniform_sgs_skeleton(dag, SgsConfig(seed=split_seed(605, rep)))
        b = uniform_sgs_skeleton(dag, SgsConfig(seed=split_seed(605, rep)))
        assert a.e_pred == b.e_pred == true_edge_set(dag)
        assert a.stats.total_calls == b.stats.total_calls
        for pair, sep in a.separators.items():
            assert is_d_separated(dag, pair, sep)


def test_sgs_skeleton_call_totals_edge_cases():
    # edgeless n=5: every pair finds the empty set first, 10 pairs x 1 call
    edgeless = Dag(5, [])
    res = uniform_sgs_skeleton(edgeless, SgsConfig(seed=1))
    assert res.stats.total_calls == 10
    # complete n=5: nothing separates, every pair exhausts 2^3 subsets
    complete = Dag(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
    res2 = uniform_sgs_skeleton(complete, SgsConfig(seed=1, call_cap=None))
    assert res2.stats.total_calls == 80


def test_sgs_config_validation():
    with pytest.raises(ValueError):
        SgsConfig(seed=-1)
    with pytest.raises(ValueError):
        SgsConfig(seed=1, call_cap=0)


def test_empirical_precision():
    # denominator counts truly nonadjacent pairs, numerator the removed ones
    records = [
        (NodePair(0, 1), True, True),
        (NodePair(0, 2), True, False),
        (NodePair(1, 2), False, True),
        (NodePair(2, 3), False, False),
    ]
    assert empirical_precision(records) == pytest.approx(1 / 2)
    full = [(NodePair(0, k), True, True) for k in range(1, 31)]
    partial = full[:3] + [(p, False, t) for (p, _, t) in full[3:]]
    assert empirical_precision(partial) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        empirical_precision([(NodePair(0, 1), True, False)])
