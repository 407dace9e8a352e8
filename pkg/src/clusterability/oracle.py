"""Exhaustive set-partition enumeration, used as the reference answer in tests.

All restricted-growth strings of length n are materialised as one array (in
lexicographic order) and every edge is scored column-wise, so ``C_k`` for
every ``k`` falls out of a single pass.
"""
from __future__ import annotations

import numpy as np

from .errors import BadK, TooLarge
from .signed_graph import Partition, SignedGraph

ENUMERATION_LIMIT = 12


def restricted_growth_strings(n: int, max_clusters: int | None = None) -> np.ndarray:
    """Every RGS of length ``n`` with at most ``max_clusters`` labels, lexicographically sorted."""
    cap = n if max_clusters is None else max_clusters
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    rows = np.zeros((1, 1), dtype=np.int8)
    top = np.zeros(1, dtype=np.int8)  # max label used so far, per row
    for _ in range(1, n):
        choices = np.minimum(top + 2, cap).astype(np.int64)
        parent = np.repeat(np.arange(len(rows)), choices)
        starts = np.repeat(np.cumsum(choices) - choices, choices)
        label = (np.arange(len(parent)) - starts).astype(np.int8)
        rows = np.concatenate([rows[parent], label[:, None]], axis=1)
        top = np.maximum(top[parent], label)
    return rows


def _scores(g: SignedGraph, rows: np.ndarray) -> np.ndarray:
    cost = np.zeros(len(rows), dtype=np.int32)
    for i, j, s in g.edges:
        same = rows[:, i] == rows[:, j]
        cost += (~same) if s > 0 else same
    return cost


def _enumerate(g: SignedGraph, limit: int):
    if g.n > limit:
        raise TooLarge(f"{g.n} nodes exceeds the enumeration limit of {limit}")
    rows = restricted_growth_strings(g.n)
    return rows, _scores(g, rows)


def brute_force_Ck(g: SignedGraph, k: int, limit: int = ENUMERATION_LIMIT) -> tuple[int, Partition]:
    """Minimum frustration over partitions into at most ``k`` clusters.

    Returns the lexicographically smallest canonical optimum.
    """
    if g.n == 0 and k >= 1:
        return 0, Partition(())
    if not 1 <= k <= g.n:
        raise BadK(f"k={k} outside 1..{g.n}")
    if g.n > limit:
        raise TooLarge(f"{g.n} nodes exceeds the enumeration limit of {limit}")
    rows = restricted_growth_strings(g.n, k)
    cost = _scores(g, rows)
    best = int(np.argmin(cost))  # first minimum = lexicographically smallest
    return int(cost[best]), Partition(tuple(rows[best]))


def brute_force_C(g: SignedGraph, limit: int = ENUMERATION_LIMIT) -> tuple[int, Partition, int]:
    """Minimum frustration over all partitions, an optimum, and the smallest optimal k."""
    if g.n == 0:
        return 0, Partition(()), 0
    rows, cost = _enumerate(g, limit)
    value = int(cost.min())
    best = int(np.argmin(cost))
    used = rows.max(axis=1).astype(np.int64) + 1
    k_min_star = int(used[cost == value].min())
    return value, Partition(tuple(rows[best])), k_min_star


def brute_force_curve(g: SignedGraph, limit: int = ENUMERATION_LIMIT) -> dict[int, int]:
    """``{k: C_k(G)}`` for ``k = 1..n`` from one enumeration."""
    rows, cost = _enumerate(g, limit)
    used = rows.max(axis=1).astype(np.int64) + 1
    out = {}
    best = None
    for k in range(1, g.n + 1):
        here = cost[used == k]
        if len(here):
            m = int(here.min())
            best = m if best is None else min(best, m)
        out[k] = best
    return out
