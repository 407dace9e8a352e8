"""Signed graphs, partitions and connected triads.

Nodes carry external string labels (legislator names, say) but every
algorithm in the package works on 0-based indices in first-appearance order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import BadSign, DuplicateEdge, GraphError, MissingAttribute, SelfLoop


@dataclass(frozen=True, eq=False)
class SignedGraph:
    """Undirected simple graph with +1/-1 edge signs.

    ``edges`` holds ``(i, j, sign)`` with ``i < j``. ``attributes`` maps a node
    index to its attribute dict (party, ideology, effectiveness, ...); nodes
    without attributes are simply absent from the mapping.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int, int], ...]
    attributes: Mapping[int, Mapping[str, Any]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def m_pos(self) -> int:
        return sum(1 for _, _, s in self.edges if s > 0)

    @property
    def m_neg(self) -> int:
        return self.m - self.m_pos

    @cached_property
    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.nodes)}

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense symmetric sign matrix with entries in {-1, 0, +1}."""
        a = np.zeros((self.n, self.n), dtype=np.int8)
        if self.edges:
            e = np.asarray(self.edges, dtype=np.int64)
            a[e[:, 0], e[:, 1]] = e[:, 2]
            a[e[:, 1], e[:, 0]] = e[:, 2]
        return a

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node, the ``(neighbor, sign)`` pairs."""
        nbrs: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, j, s in self.edges:
            nbrs[i].append((j, s))
            nbrs[j].append((i, s))
        return tuple(tuple(x) for x in nbrs)

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    def sign(self, i: int, j: int) -> int:
        return int(self.adjacency[i, j])

    def isolates(self) -> list[int]:
        return [i for i in range(self.n) if not self.neighbors[i]]

    def attribute(self, i: int, name: str) -> Any:
        try:
            value = self.attributes[i][name]
        except KeyError:
            raise MissingAttribute(f"node {self.nodes[i]!r} has no {name!r} attribute") from None
        if value is None:
            raise MissingAttribute(f"node {self.nodes[i]!r} has no {name!r} attribute")
        return value

    def with_attributes(self, attrs: Mapping[str, Mapping[str, Any]]) -> SignedGraph:
        """Return a copy carrying ``attrs`` (keyed by label); unknown labels are ignored."""
        by_index = {self.index[label]: dict(v) for label, v in attrs.items() if label in self.index}
        return SignedGraph(self.nodes, self.edges, by_index)

    def relabel(self, perm: Sequence[int]) -> SignedGraph:
        """Graph with node ``i`` moved to position ``perm[i]``."""
        nodes = [""] * self.n
        for i, p in enumerate(perm):
            nodes[p] = self.nodes[i]
        edges = []
        for i, j, s in self.edges:
            a, b = perm[i], perm[j]
            edges.append((min(a, b), max(a, b), s))
        attrs = {perm[i]: v for i, v in self.attributes.items()}
        return SignedGraph(tuple(nodes), tuple(sorted(edges)), attrs)

    def __repr__(self) -> str:
        return f"SignedGraph(n={self.n}, m={self.m}, m+={self.m_pos}, m-={self.m_neg})"


def build_graph(
    edge_list: Iterable[tuple[str, str, int]],
    nodes: Iterable[str] = (),
    attributes: Mapping[str, Mapping[str, Any]] | None = None,
) -> SignedGraph:
    """Validate a labelled edge list and index it.

    Labels listed in ``nodes`` come first (so isolates can be declared), then
    any further labels in order of first appearance in ``edge_list``.
    """
    index: dict[str, int] = {}

    def idx(label) -> int:
        label = str(label)
        if not label:
            raise GraphError("node labels must be non-empty strings")
        if label not in index:
            index[label] = len(index)
        return index[label]

    for label in nodes:
        idx(label)
    seen: set[tuple[int, int]] = set()
    edges = []
    for a, b, s in edge_list:
        if isinstance(s, bool) or s not in (1, -1):
            raise BadSign(f"edge ({a}, {b}) has sign {s!r}; expected 1 or -1")
        i, j = idx(a), idx(b)
        if i == j:
            raise SelfLoop(f"self-loop on node {a!r}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdge(f"edge ({a}, {b}) listed more than once")
        seen.add(key)
        edges.append((key[0], key[1], int(s)))
    g = SignedGraph(tuple(index), tuple(edges))
    if attributes:
        g = g.with_attributes(attributes)
    return g


def from_adjacency(a: np.ndarray, labels: Sequence[str] | None = None) -> SignedGraph:
    """Graph from a symmetric sign matrix; only the upper triangle is read."""
    a = np.asarray(a)
    n = a.shape[0]
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
    iu, ju = np.nonzero(np.triu(a, 1))
    edges = tuple((int(i), int(j), int(np.sign(a[i, j]))) for i, j in zip(iu, ju))
    return SignedGraph(labels, edges)


@dataclass(frozen=True)
class Partition:
    """Cluster index per node. Not necessarily canonical; see :func:`canonicalize`."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(c) for c in self.assignment))
        if any(c < 0 for c in self.assignment):
            raise ValueError("cluster indices must be non-negative")

    def __len__(self) -> int:
        return len(self.assignment)

    def __getitem__(self, i: int) -> int:
        return self.assignment[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.assignment)

    @property
    def cluster_count(self) -> int:
        return len(set(self.assignment))

    def clusters(self) -> list[list[int]]:
        """Member lists, ordered by first appearance."""
        groups: dict[int, list[int]] = {}
        for i, c in enumerate(self.assignment):
            groups.setdefault(c, []).append(i)
        return list(groups.values())

    def is_canonical(self) -> bool:
        return self.assignment == canonicalize(self).assignment

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[int]], n: int) -> Partition:
        assignment = [-1] * n
        for c, members in enumerate(clusters):
            for i in members:
                if assignment[i] != -1:
                    raise ValueError(f"node {i} appears in two clusters")
                assignment[i] = c
        if -1 in assignment:
            raise ValueError("clusters do not cover every node")
        return cls(tuple(assignment))


def canonicalize(p: Partition | Sequence[int]) -> Partition:
    """Relabel clusters in order of first appearance (restricted-growth form)."""
    relabel: dict[int, int] = {}
    out = []
    for c in p:
        if c not in relabel:
            relabel[c] = len(relabel)
        out.append(relabel[c])
    return Partition(tuple(out))


def attribute_partition(g: SignedGraph, attribute: str = "party") -> Partition:
    """Put nodes sharing a categorical attribute value in the same cluster."""
    values = [g.attribute(i, attribute) for i in range(g.n)]
    return canonicalize(values)


@dataclass(frozen=True)
class TriadSet:
    """Node triples ``i < j < k`` joined by at least two edges, as an (T, 3) array."""

    triads: np.ndarray

    def __len__(self) -> int:
        return len(self.triads)

    def __iter__(self):
        return (tuple(int(x) for x in t) for t in self.triads)


def connected_triads(g: SignedGraph) -> TriadSet:
    b = (g.adjacency != 0).astype(np.int8)
    n = g.n
    chunks = []
    for i in range(n - 2):
        sub = b[i + 1:, i + 1:]
        row = b[i, i + 1:]
        total = row[:, None] + row[None, :] + sub
        jj, kk = np.nonzero(np.triu(total >= 2, 1))
        if len(jj):
            chunk = np.empty((len(jj), 3), dtype=np.int32)
            chunk[:, 0] = i
            chunk[:, 1] = jj + i + 1
            chunk[:, 2] = kk + i + 1
            chunks.append(chunk)
    triads = np.concatenate(chunks) if chunks else np.empty((0, 3), dtype=np.int32)
    return TriadSet(triads)


def count_connected_triads(g: SignedGraph) -> int:
    """|T| without listing it: wedges counted at their centre, minus 2 per triangle."""
    b = (g.adjacency != 0).astype(np.int64)
    deg = b.sum(axis=1)
    wedges = int((deg * (deg - 1) // 2).sum())
    triangles = int(((b @ b) * b).sum()) // 6
    return wedges - 2 * triangles
