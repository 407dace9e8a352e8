import random

import pytest
from hypothesis import given, settings, strategies as st

from clusterability.frustration import count_frustration, frustration_total
from clusterability.heuristic import (
    HeuristicConfig, greedy_partition, improve, local_search, random_partition,
)
from clusterability.oracle import brute_force_C, brute_force_Ck
from clusterability.signed_graph import Partition, build_graph

from conftest import random_graph


def _is_one_move_optimal(g, assign, cap):
    value = frustration_total(g, assign)
    used = set(assign)
    targets = sorted(used) + ([max(used) + 1] if len(used) < cap else [])
    for v in range(g.n):
        for c in targets:
            if c == assign[v]:
                continue
            trial = list(assign)
            trial[v] = c
            if len(set(trial)) <= cap and frustration_total(g, trial) < value:
                return False
    return True


def test_config_validation():
    for bad in (dict(restarts=0), dict(max_sweeps=0), dict(max_clusters=0)):
        with pytest.raises(ValueError):
            HeuristicConfig(**bad)


def test_toy_reaches_zero(toy):
    value, p = local_search(toy, HeuristicConfig(restarts=5))
    assert value == 0 == count_frustration(toy, p).total


def test_all_positive_single_cluster_unchanged():
    g = build_graph([("a", "b", 1), ("b", "c", 1), ("a", "c", 1), ("c", "d", 1)])
    value, p = local_search(g, HeuristicConfig(restarts=1), Partition((0, 0, 0, 0)))
    assert value == 0
    assert list(p) == [0, 0, 0, 0]


def test_one_negative_edge_split():
    g = build_graph([("a", "b", -1)])
    value, p = local_search(g, HeuristicConfig(max_clusters=2, restarts=1), Partition((0, 0)))
    assert value == 0
    assert list(p) == [0, 1]


def test_seed_over_cap_rejected(toy):
    with pytest.raises(ValueError):
        local_search(toy, HeuristicConfig(max_clusters=2), Partition((0, 1, 2, 0, 0)))


def test_empty_graph():
    assert local_search(build_graph([]))[0] == 0


def test_greedy_respects_cap():
    rng = random.Random(5)
    g = random_graph(rng, 30, 0.3, pos_prob=0.2)
    for cap in (1, 2, 3, 7):
        assert len(set(greedy_partition(g, cap))) <= cap


def test_random_partition_is_rgs():
    rng = random.Random(0)
    for _ in range(100):
        p = random_partition(9, 4, rng)
        top = -1
        for c in p:
            assert c <= top + 1 and c < 4
            top = max(top, c)


@pytest.mark.parametrize("seed", range(40))
def test_upper_bound_soundness(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    g = random_graph(rng, n, rng.choice([0.3, 0.6, 0.9]))
    cfg = HeuristicConfig(restarts=3, rng_seed=seed)
    value, p = local_search(g, cfg)
    assert value >= brute_force_C(g)[0]
    assert value == count_frustration(g, p).total
    assert _is_one_move_optimal(g, list(p), n)
    k = rng.randint(1, n)
    capped = HeuristicConfig(max_clusters=k, restarts=3, rng_seed=seed)
    value, p = local_search(g, capped)
    assert p.cluster_count <= k
    assert value >= brute_force_Ck(g, k)[0]
    assert value == count_frustration(g, p).total
    assert _is_one_move_optimal(g, list(p), k)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**63 - 1))
def test_deterministic(graph_seed, rng_seed):
    rng = random.Random(graph_seed)
    g = random_graph(rng, rng.randint(1, 25), 0.3)
    cfg = HeuristicConfig(restarts=4, rng_seed=rng_seed)
    assert local_search(g, cfg) == local_search(g, cfg)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_improve_trace_strictly_decreasing(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 20)
    g = random_graph(rng, n, 0.4)
    cap = rng.randint(1, n)
    start = random_partition(n, cap, rng)
    before = frustration_total(g, start)
    trace = []
    value = improve(g, start, cap, trace=trace)
    seq = [before] + trace
    assert all(b < a for a, b in zip(seq, seq[1:]))
    assert value == frustration_total(g, start) == seq[-1]
    assert len(set(start)) <= cap
