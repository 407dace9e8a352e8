import json

import pytest

from clusterability import io, replication
from clusterability.errors import BadSign, GraphError, SizeMismatch
from clusterability.frustration import count_frustration
from clusterability.signed_graph import Partition


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_edge_list_round_trip(tmp_path, toy):
    path = tmp_path / "toy.csv"
    io.write_edge_list(path, toy)
    g = io.load_graph(path)
    assert (g.n, g.m, g.m_pos) == (5, 7, 2)
    assert path.read_text().splitlines()[0] == "source,target,sign"


@pytest.mark.parametrize("sign", ["+1", "1.0", "0", "2", "x", ""])
def test_sign_must_be_literal(tmp_path, sign):
    path = _write(tmp_path / "e.csv", f"source,target,sign\na,b,{sign}\n")
    with pytest.raises(BadSign):
        io.read_edge_list(path)


def test_bad_header(tmp_path):
    path = _write(tmp_path / "e.csv", "from,to,sign\na,b,1\n")
    with pytest.raises(GraphError):
        io.read_edge_list(path)


def test_attributes_and_isolates(tmp_path):
    edges = _write(tmp_path / "e.csv", "source,target,sign\na,b,-1\n")
    attrs = _write(tmp_path / "a.csv", "node,party,ideology,effectiveness\n"
                                       "a,D,-0.3,1.5\nb,R,0.4,NA\nc,D,,0.2\n")
    g = io.load_graph(edges, attrs)
    assert g.nodes == ("a", "b", "c")
    assert g.isolates() == [2]
    assert g.attributes[0] == {"party": "D", "ideology": -0.3, "effectiveness": 1.5}
    assert g.attributes[1]["effectiveness"] is None
    assert g.attributes[2]["ideology"] is None


def test_partition_round_trip(tmp_path, toy):
    path = tmp_path / "p.csv"
    io.write_partition(path, toy, Partition((2, 2, 2, 0, 1)))
    assert path.read_text().splitlines()[:2] == ["node,cluster", "1,0"]
    assert list(io.read_partition(path, toy)) == [0, 0, 0, 1, 2]


def test_partition_node_mismatch(tmp_path, toy):
    path = _write(tmp_path / "p.csv", "node,cluster\n1,0\n2,0\n3,0\n4,1\n")
    with pytest.raises(SizeMismatch):
        io.read_partition(path, toy)
    path = _write(tmp_path / "q.csv", "node,cluster\n1,0\n2,0\n3,0\n4,1\n5,2\n6,0\n")
    with pytest.raises(SizeMismatch):
        io.read_partition(path, toy)


def test_partition_other_column(tmp_path, toy):
    path = _write(tmp_path / "p.csv", "node,k2,k3\n1,a,x\n2,a,x\n3,a,x\n4,b,y\n5,b,z\n")
    assert count_frustration(toy, io.read_partition(path, toy, "k2")).total == 1
    assert count_frustration(toy, io.read_partition(path, toy, "k3")).total == 0


def test_reports(tmp_path, toy):
    p = Partition((0, 0, 0, 1, 1))
    io.write_frustration(tmp_path / "f.csv", toy, p, count_frustration(toy, p))
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "source,target,sign,frustrated,reason"
    assert "4,5,-1,1,negative-within-cluster" in lines
    io.write_json(tmp_path / "r.json", {"b": 1, "a": [1, 2]})
    assert json.loads((tmp_path / "r.json").read_text()) == {"a": [1, 2], "b": 1}


# -- replication layout ------------------------------------------------------

def _fake_release(root, toy):
    io.write_edge_list(root / "H97.csv", toy)
    _write(root / "attributes-97.csv", "node,party,ideology,effectiveness\n"
           + "".join(f"{v},{'D' if v in '123' else 'R'},0.1,1.0\n" for v in "12345") + "6,R,0.2,1.0\n")
    _write(root / "clusters-house.csv", "session,legislator,k2,k3\n"
           "97,1,1,1\n97,2,1,1\n97,3,1,1\n97,4,2,2\n97,5,2,3\n98,1,1,NA\n")


def test_replication_loader(tmp_path, toy, monkeypatch):
    monkeypatch.delenv(replication.ENV_VAR, raising=False)
    assert replication.data_dir() is None
    monkeypatch.setenv(replication.ENV_VAR, str(tmp_path))
    assert replication.data_dir() is None  # no clusters file yet
    _fake_release(tmp_path, toy)
    assert replication.data_dir() == tmp_path
    published = replication.read_published_partitions(tmp_path / "clusters-house.csv")
    assert set(published) == {97, 98}
    assert published[98] == {2: {"1": "1"}}
    g = replication.load_session(tmp_path, 97)
    assert g.n == 6 and g.isolates() == [5]
    totals = {k: count_frustration(g, replication.published_partition(g, cl)).total
              for k, cl in published[97].items()}
    assert totals == {2: 1, 3: 0}


def test_published_partition_missing_member(toy):
    with pytest.raises(SizeMismatch):
        replication.published_partition(toy, {"1": "a", "2": "a"})


def _two_party_release(tmp_path):
    """Three blocs: 0-5 D, 6-11 R, 12-13 a small D splinter opposing everyone."""
    blocs = {**{str(i): ("D", -0.4, "1") for i in range(6)},
             **{str(i): ("R", 0.5, "2") for i in range(6, 12)},
             **{str(i): ("D", -0.1, "3") for i in (12, 13)}}
    labels = list(blocs)
    edges = []
    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            u, v = labels[a], labels[b]
            edges.append(f"{u},{v},{1 if blocs[u][2] == blocs[v][2] else -1}")
    (tmp_path / "H97.csv").write_text("source,target,sign\n" + "\n".join(edges) + "\n")
    (tmp_path / "attributes-97.csv").write_text(
        "node,party,ideology,effectiveness\n" + "".join(f"{u},{q},{x},1.0\n" for u, (q, x, _) in blocs.items()))
    (tmp_path / "clusters-house.csv").write_text(
        "session,legislator,k3\n" + "".join(f"97,{u},{c}\n" for u, (_, _, c) in blocs.items()))


def test_replication_checks(tmp_path):
    _two_party_release(tmp_path)
    published = replication.read_published_partitions(tmp_path / "clusters-house.csv")
    g = replication.load_session(tmp_path, 97)
    assert replication.published_indices(g, published[97]) == {3: 0}
    p = replication.published_partition(g, published[97][3])
    named = replication.coalitions(g, p)
    assert {x: named[x].size for x in "LCS"} == {"L": 6, "C": 6, "S": 2}
    assert named["S"].median_ideology == pytest.approx(-0.1)
    ratios = replication.pooled_ratios([(g, p)], "endpoint", "sum")
    # splinter: 1 internal positive edge counted at both ends, 2 x 12 negative edges out
    assert ratios["S"] == pytest.approx(24 / 2)
    assert ratios["LC"] == pytest.approx((6 * 6 * 2 + 12 * 2) / (2 * 15 * 2))
