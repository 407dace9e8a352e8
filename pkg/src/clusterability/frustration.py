"""Frustration of a fixed partition, in both the assignment and pairwise views."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import SizeMismatch
from .signed_graph import Partition, SignedGraph, TriadSet

POSITIVE_BETWEEN = "positive-between-clusters"
NEGATIVE_WITHIN = "negative-within-cluster"


@dataclass(frozen=True)
class FrustrationReport:
    total: int
    frustrated_edges: list[tuple[int, int, int, str]]
    per_cluster_internal_negative: dict[int, int] = field(default_factory=dict)
    inter_cluster_positive: int = 0


def _check_size(g: SignedGraph, p: Sequence[int]) -> None:
    if len(p) != g.n:
        raise SizeMismatch(f"partition has {len(p)} entries, graph has {g.n} nodes")


def frustration_total(g: SignedGraph, p: Partition | Sequence[int]) -> int:
    """Number of frustrated edges; the cheap path of :func:`count_frustration`."""
    _check_size(g, p)
    c = p.assignment if isinstance(p, Partition) else p
    total = 0
    for i, j, s in g.edges:
        if (c[i] == c[j]) != (s > 0):
            total += 1
    return total


def count_frustration(g: SignedGraph, p: Partition | Sequence[int]) -> FrustrationReport:
    _check_size(g, p)
    c = p.assignment if isinstance(p, Partition) else tuple(p)
    frustrated = []
    internal_neg: Counter[int] = Counter()
    between_pos = 0
    for i, j, s in g.edges:
        same = c[i] == c[j]
        if s > 0 and not same:
            frustrated.append((i, j, s, POSITIVE_BETWEEN))
            between_pos += 1
        elif s < 0 and same:
            frustrated.append((i, j, s, NEGATIVE_WITHIN))
            internal_neg[c[i]] += 1
    return FrustrationReport(
        total=len(frustrated),
        frustrated_edges=frustrated,
        per_cluster_internal_negative=dict(sorted(internal_neg.items())),
        inter_cluster_positive=between_pos,
    )


def pairwise_indicator(p: Partition | Sequence[int]) -> np.ndarray:
    """Symmetric 0/1 matrix with ``y[i, j] = 1`` iff ``i`` and ``j`` share a cluster.

    The diagonal is left at 1; only ``i < j`` entries are meaningful.
    """
    c = np.asarray(list(p))
    return (c[:, None] == c[None, :]).astype(np.int8)


def _y(y, i: int, j: int) -> int:
    if isinstance(y, Mapping):
        return int(y.get((i, j), y.get((j, i), 0)))
    return int(y[i][j])


def eq2_objective(g: SignedGraph, y) -> int:
    """Sum over edges of ``a(a+1)/2 - a*y``: ``1 - y`` for positive, ``y`` for negative edges.

    ``y`` is either a square 0/1 array or a mapping ``(i, j) -> 0/1``
    (missing pairs read as 0).
    """
    total = 0
    for i, j, a in g.edges:
        total += a * (a + 1) // 2 - a * _y(y, i, j)
    return total


def check_transitivity(y, triads: TriadSet | Iterable[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    """Triads violating any rotation of ``y_ij + y_ik <= 1 + y_jk``.

    A triad is violated exactly when two of its pairs are together and the
    third is apart.
    """
    violated = []
    for i, j, k in triads:
        yij, yik, yjk = _y(y, i, j), _y(y, i, k), _y(y, j, k)
        if yij + yik > 1 + yjk or yij + yjk > 1 + yik or yik + yjk > 1 + yij:
            violated.append((i, j, k))
    return violated


def all_triples(n: int) -> Iterable[tuple[int, int, int]]:
    return combinations(range(n), 3)
