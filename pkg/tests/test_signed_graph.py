import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clusterability.errors import BadSign, DuplicateEdge, MissingAttribute, SelfLoop
from clusterability.signed_graph import (
    Partition, attribute_partition, build_graph, canonicalize, connected_triads,
    count_connected_triads, from_adjacency,
)

from conftest import TOY_EDGES, random_graph


def test_toy_counts(toy):
    assert (toy.n, toy.m, toy.m_pos, toy.m_neg) == (5, 7, 2, 5)


def test_first_appearance_order():
    g = build_graph(TOY_EDGES)
    assert g.nodes == ("1", "3", "2", "4", "5")
    assert g.sign(g.index["4"], g.index["5"]) == -1


def test_empty_graph():
    g = build_graph([])
    assert (g.n, g.m) == (0, 0)
    assert len(connected_triads(g)) == 0


@pytest.mark.parametrize("edges, exc", [
    ([("a", "b", 1), ("a", "b", -1)], DuplicateEdge),
    ([("a", "b", 1), ("b", "a", 1)], DuplicateEdge),
    ([("a", "a", 1)], SelfLoop),
    ([("a", "b", 0)], BadSign),
    ([("a", "b", 2)], BadSign),
    ([("a", "b", 0.5)], BadSign),
])
def test_rejects_invalid(edges, exc):
    with pytest.raises(exc):
        build_graph(edges)


def test_adjacency_symmetric_zero_diagonal():
    g = random_graph(random.Random(3), 9, 0.5)
    a = g.adjacency
    assert (a == a.T).all()
    assert (np.diag(a) == 0).all()
    assert int((a == 1).sum()) == 2 * g.m_pos
    assert int((a == -1).sum()) == 2 * g.m_neg


def test_from_adjacency_round_trip(toy):
    g = from_adjacency(toy.adjacency, toy.nodes)
    assert sorted(g.edges) == sorted(toy.edges)


def _triads_by_definition(g):
    a = np.abs(g.adjacency)
    return [t for t in itertools.combinations(range(g.n), 3)
            if a[t[0], t[1]] + a[t[0], t[2]] + a[t[1], t[2]] >= 2]


def test_toy_triads(toy):
    assert len(connected_triads(toy)) == 9
    assert [tuple(t) for t in connected_triads(toy)] == _triads_by_definition(toy)
    assert count_connected_triads(toy) == 9


def test_triad_trivia():
    assert len(connected_triads(build_graph([], nodes=list("abcd")))) == 0
    assert len(connected_triads(build_graph([("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]))) == 1


@pytest.mark.parametrize("seed", range(20))
def test_triads_match_definition(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(0, 14), rng.choice([0.2, 0.5, 0.9]))
    listed = [tuple(int(x) for x in t) for t in connected_triads(g)]
    assert listed == _triads_by_definition(g)
    assert count_connected_triads(g) == len(listed) <= g.n * (g.n - 1) * (g.n - 2) // 6


def test_triads_equal_all_triples_only_when_dense():
    complete = build_graph([(str(i), str(j), 1) for i in range(6) for j in range(i + 1, 6)])
    assert len(connected_triads(complete)) == 20
    # removing a perfect matching keeps every triple at two edges
    matched = build_graph([(str(i), str(j), 1) for i in range(6) for j in range(i + 1, 6)
                           if not (j == i + 1 and i % 2 == 0)])
    assert len(connected_triads(matched)) == 20
    path = build_graph([("0", "1", 1), ("1", "2", 1), ("2", "3", 1)])
    assert len(connected_triads(path)) == 2


@pytest.mark.parametrize("raw, expected", [
    ([2, 2, 2, 0, 0], [0, 0, 0, 1, 1]),
    ([0, 1, 2, 3], [0, 1, 2, 3]),
    ([1, 0, 1], [0, 1, 0]),
    (["b", "a", "b"], [0, 1, 0]),
    ([], []),
])
def test_canonicalize(raw, expected):
    p = canonicalize(raw)
    assert list(p) == expected
    assert p.is_canonical()


@given(st.lists(st.integers(0, 6), max_size=15))
def test_canonicalize_idempotent_and_rgs(raw):
    p = canonicalize(raw)
    assert canonicalize(p) == p
    top = -1
    for c in p:
        assert c <= top + 1
        top = max(top, c)
    assert p.cluster_count == len(set(raw))


def test_partition_helpers():
    p = Partition.from_clusters([[3, 4], [0, 1, 2]], 5)
    assert list(p) == [1, 1, 1, 0, 0]
    assert not p.is_canonical()
    assert list(canonicalize(p)) == [0, 0, 0, 1, 1]
    assert p.clusters() == [[0, 1, 2], [3, 4]]
    assert p.cluster_count == 2


def _with_parties(parties):
    nodes = [str(i) for i in range(len(parties))]
    return build_graph([], nodes=nodes, attributes={n: {"party": q} for n, q in zip(nodes, parties)})


@pytest.mark.parametrize("parties, expected", [
    (["D", "D", "R", "R"], [0, 0, 1, 1]),
    (["D", "D", "D"], [0, 0, 0]),
    (["D", "R", "I", "D"], [0, 1, 2, 0]),
])
def test_attribute_partition(parties, expected):
    assert list(attribute_partition(_with_parties(parties))) == expected


def test_attribute_partition_missing():
    g = _with_parties(["D", None, "R"])
    with pytest.raises(MissingAttribute):
        attribute_partition(g)
    with pytest.raises(MissingAttribute):
        attribute_partition(_with_parties(["D", "R"]), "region")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_relabel_preserves_structure(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 9), 0.5)
    perm = list(range(g.n))
    rng.shuffle(perm)
    h = g.relabel(perm)
    assert (h.n, h.m, h.m_pos, h.m_neg) == (g.n, g.m, g.m_pos, g.m_neg)
    assert len(connected_triads(h)) == len(connected_triads(g))
    for i, j, s in g.edges:
        assert h.sign(h.index[g.nodes[i]], h.index[g.nodes[j]]) == s
