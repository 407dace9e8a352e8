"""Greedy construction plus single-node-move local search.

Gives an upper bound only. The exact solver uses it as its first incumbent;
on its own it is meant for graphs too large to solve exactly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .frustration import frustration_total
from .signed_graph import Partition, SignedGraph, canonicalize


@dataclass(frozen=True)
class HeuristicConfig:
    max_clusters: int | None = None  # None: unbounded
    restarts: int = 5
    max_sweeps: int = 1000
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.max_clusters is not None and self.max_clusters < 1:
            raise ValueError("max_clusters must be >= 1")


def _cap(g: SignedGraph, cfg: HeuristicConfig) -> int:
    return g.n if cfg.max_clusters is None else min(cfg.max_clusters, max(g.n, 1))


def greedy_partition(g: SignedGraph, max_clusters: int | None = None) -> list[int]:
    """Place nodes by descending degree into the cluster of least marginal frustration."""
    cap = g.n if max_clusters is None else max_clusters
    assign = [-1] * g.n
    used = 0
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    for v in order:
        pos = [0] * (used + 1)
        neg = [0] * (used + 1)
        pos_total = 0
        for u, s in g.neighbors[v]:
            c = assign[u]
            if c < 0:
                continue
            if s > 0:
                pos[c] += 1
                pos_total += 1
            else:
                neg[c] += 1
        options = used + 1 if used < cap else used
        best_c, best_cost = 0, None
        for c in range(options):
            cost = pos_total - pos[c] + neg[c]
            if best_cost is None or cost < best_cost:
                best_c, best_cost = c, cost
        assign[v] = best_c
        if best_c == used:
            used += 1
    return assign


def random_partition(n: int, max_clusters: int | None, rng: random.Random) -> list[int]:
    """Restricted-growth string drawn position by position."""
    cap = n if max_clusters is None else max_clusters
    out = []
    top = -1
    for _ in range(n):
        c = rng.randint(0, min(top + 1, cap - 1))
        out.append(c)
        top = max(top, c)
    return out


def improve(
    g: SignedGraph,
    assign: list[int],
    max_clusters: int | None = None,
    max_sweeps: int = 1000,
    trace: list[int] | None = None,
) -> int:
    """Move single nodes while that strictly lowers frustration; edits ``assign`` in place.

    Returns the final frustration. ``trace``, if given, receives the value
    after every accepted move.
    """
    n = g.n
    cap = n if max_clusters is None else max_clusters
    sizes = [0] * max(n, 1)
    for c in assign:
        sizes[c] += 1
    used = sum(1 for s in sizes if s)
    value = frustration_total(g, assign)
    for _ in range(max_sweeps):
        moved = False
        for v in range(n):
            nbrs = g.neighbors[v]
            if not nbrs:
                continue
            here = assign[v]
            pos: dict[int, int] = {}
            neg: dict[int, int] = {}
            pos_total = 0
            for u, s in nbrs:
                c = assign[u]
                if s > 0:
                    pos[c] = pos.get(c, 0) + 1
                    pos_total += 1
                else:
                    neg[c] = neg.get(c, 0) + 1
            current = pos_total - pos.get(here, 0) + neg.get(here, 0)
            best_c, best_cost = here, current
            # only clusters holding a neighbour can beat an empty one
            for c in sorted(set(pos) | set(neg)):
                if c == here:
                    continue
                cost = pos_total - pos.get(c, 0) + neg.get(c, 0)
                if cost < best_cost:
                    best_c, best_cost = c, cost
            if pos_total < best_cost and sizes[here] > 1:
                # a cluster with no neighbour of v, new if allowed
                if used < cap:
                    best_c, best_cost = sizes.index(0), pos_total
                else:
                    for c in range(n):
                        if sizes[c] and c != here and c not in pos and c not in neg:
                            best_c, best_cost = c, pos_total
                            break
            if best_cost < current:
                sizes[here] -= 1
                sizes[best_c] += 1
                if sizes[here] == 0:
                    used -= 1
                if sizes[best_c] == 1:
                    used += 1
                assign[v] = best_c
                value += best_cost - current
                moved = True
                if trace is not None:
                    trace.append(value)
        if not moved:
            break
    return value


def local_search(
    g: SignedGraph,
    cfg: HeuristicConfig = HeuristicConfig(),
    seed_partition: Partition | None = None,
) -> tuple[int, Partition]:
    """Best 1-move local optimum over the seed (or greedy start) and random restarts.

    No optimality guarantee: the value is an upper bound on the optimum.
    """
    if g.n == 0:
        return 0, Partition(())
    cap = _cap(g, cfg)
    if seed_partition is not None:
        if len(seed_partition) != g.n:
            raise ValueError("seed partition does not match the graph")
        if seed_partition.cluster_count > cap:
            raise ValueError(f"seed partition uses more than {cap} clusters")
        first = list(canonicalize(seed_partition))
    else:
        first = greedy_partition(g, cap)
    rng = random.Random(cfg.rng_seed)
    starts = [first] + [random_partition(g.n, cap, rng) for _ in range(cfg.restarts - 1)]
    best = None
    for start in starts:
        value = improve(g, start, cap, cfg.max_sweeps)
        key = (value, canonicalize(start).assignment)
        if best is None or key < best:
            best = key
    return best[0], Partition(best[1])
