"""Exact branch-and-bound for C_k(G) (at most k clusters) and C(G) (any number).

Nodes are fixed one at a time in descending-degree order. A node may join any
cluster already opened or open the next one, so each set partition is reached
exactly once (restricted-growth labelling). The bound at a search node is

* frustration among the nodes already fixed, plus
* for every free node, the cheapest cluster it could join given its fixed
  neighbours, plus
* a greedy packing of edge-disjoint triangles among free nodes that no
  partition can leave unfrustrated.

The three parts count disjoint edge sets, so their sum is admissible.
"""
from __future__ import annotations

import logging
import multiprocessing as mp
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BadK
from .frustration import frustration_total
from .heuristic import HeuristicConfig, greedy_partition, improve, local_search
from .signed_graph import Partition, SignedGraph, canonicalize

log = logging.getLogger(__name__)

OPTIMAL = "Optimal"
FEASIBLE_BOUND = "FeasibleBound"

# work cap (triangle visits) for precomputing the per-depth packing bounds
PACKING_BUDGET = 3_000_000


@dataclass
class SolveResult:
    optimum: int
    partition: Partition
    lower_bound: int
    status: str
    nodes_explored: int = 0
    leaves: int = 0
    wall_time: float = 0.0
    k_limit: int | None = None
    root_bound: int = 0
    heuristic_value: int | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def lower_bound_certificate(self) -> int:
        return self.lower_bound

    def as_record(self) -> dict:
        return {
            "optimum": self.optimum,
            "lower_bound": self.lower_bound,
            "status": self.status,
            "k_limit": self.k_limit,
            "clusters": self.partition.cluster_count,
            "nodes_explored": self.nodes_explored,
            "wall_time": round(self.wall_time, 6),
        }


class _Interrupted(Exception):
    pass


def bad_triangles(a: np.ndarray, k: int) -> np.ndarray:
    """Triangles (i < j < l) that every partition into at most ``k`` clusters frustrates.

    One negative edge among three is always frustrated; three negative edges
    are frustrated only when ``k <= 2``.
    """
    n = a.shape[0]
    out = []
    for i in range(n - 2):
        row = a[i, i + 1:]
        nz = np.nonzero(row)[0]
        if len(nz) < 2:
            continue
        sub = a[i + 1:, i + 1:][np.ix_(nz, nz)]
        r = row[nz]
        neg = (r[:, None] < 0).astype(np.int8) + (r[None, :] < 0) + (sub < 0)
        mask = (sub != 0) & ((neg == 1) | ((neg == 3) if k <= 2 else False))
        jj, ll = np.nonzero(np.triu(mask, 1))
        if len(jj):
            t = np.empty((len(jj), 3), dtype=np.int32)
            t[:, 0] = i
            t[:, 1] = nz[jj] + i + 1
            t[:, 2] = nz[ll] + i + 1
            out.append(t)
    return np.concatenate(out) if out else np.empty((0, 3), dtype=np.int32)


def packing_bounds(a: np.ndarray, k: int, budget: int = PACKING_BUDGET) -> list[int]:
    """``bounds[d]``: size of a greedy edge-disjoint packing of forced-frustration
    triangles among nodes ``d..n-1``.

    Depths are skipped when the budget runs out; a skipped depth borrows the
    value of the next computed deeper suffix, which is still a valid bound.
    """
    n = a.shape[0]
    bounds = [0] * (n + 1)
    tri = bad_triangles(a, k)
    if len(tri) == 0:
        return bounds
    # triangles touching rarely-used edges first
    e1 = tri[:, 0].astype(np.int64) * n + tri[:, 1]
    e2 = tri[:, 0].astype(np.int64) * n + tri[:, 2]
    e3 = tri[:, 1].astype(np.int64) * n + tri[:, 2]
    keys, counts = np.unique(np.concatenate([e1, e2, e3]), return_counts=True)
    score = sum(counts[np.searchsorted(keys, e)] for e in (e1, e2, e3))
    order = np.lexsort((tri[:, 2], tri[:, 1], tri[:, 0], score))
    tri = tri[order]
    e1, e2, e3 = e1[order].tolist(), e2[order].tolist(), e3[order].tolist()
    first = tri[:, 0].tolist()

    stride = max(1, int(np.ceil(n * len(first) / budget)))
    computed = set(range(0, n, stride))
    for d in computed:
        used: set[int] = set()
        count = 0
        for t in range(len(first)):
            if first[t] < d:
                continue
            a1, a2, a3 = e1[t], e2[t], e3[t]
            if a1 in used or a2 in used or a3 in used:
                continue
            used.update((a1, a2, a3))
            count += 1
        bounds[d] = count
    nxt = 0
    for d in range(n, -1, -1):
        if d in computed:
            nxt = bounds[d]
        else:
            bounds[d] = nxt if d < n else 0
    return bounds


@dataclass
class _Stats:
    nodes: int = 0
    leaves: int = 0


class _Search:
    """Depth-first search state over nodes in branching order (positions)."""

    def __init__(self, g: SignedGraph, k: int, bounding: bool = True):
        self.g = g
        self.n = n = g.n
        self.k = k
        self.bounding = bounding
        self.order = sorted(range(n), key=lambda v: (-g.degree(v), v))
        self.position = [0] * n
        for p, v in enumerate(self.order):
            self.position[v] = p
        a = g.adjacency[np.ix_(self.order, self.order)] if n else np.zeros((0, 0), np.int8)
        self.a = a
        # neighbours later in the order, split by sign
        self.later_pos = []
        self.later_neg = []
        for p in range(n):
            row = a[p, p + 1:]
            self.later_pos.append(np.nonzero(row > 0)[0] + p + 1)
            self.later_neg.append(np.nonzero(row < 0)[0] + p + 1)
        width = min(k, n) + 1
        self.P = np.zeros((n, width), dtype=np.int32)
        self.N = np.zeros((n, width), dtype=np.int32)
        self.ptot = np.zeros(n, dtype=np.int32)
        self.pack = packing_bounds(a, k) if bounding else [0] * (n + 1)
        self.assign = [-1] * n
        self.best = None  # (value, assignment in position space)
        self.best_value = np.iinfo(np.int64).max
        self.stats = _Stats()
        self.frame_bounds: list[int] = []
        self.deadline = None
        self.shared = None
        self.polish = bounding
        self.interrupt_bound = 0

    def set_incumbent(self, assignment_by_node, value: int) -> None:
        if value < self.best_value:
            self.best_value = value
            self.best = (value, [assignment_by_node[v] for v in self.order])

    def apply(self, p: int, c: int) -> None:
        self.assign[p] = c
        lp, ln = self.later_pos[p], self.later_neg[p]
        self.P[lp, c] += 1
        self.ptot[lp] += 1
        self.N[ln, c] += 1

    def undo(self, p: int, c: int) -> None:
        self.assign[p] = -1
        lp, ln = self.later_pos[p], self.later_neg[p]
        self.P[lp, c] -= 1
        self.ptot[lp] -= 1
        self.N[ln, c] -= 1

    def free_minima(self, d: int, used: int) -> np.ndarray:
        """Cheapest placement cost against fixed nodes, for positions ``d..n-1``."""
        pt = self.ptot[d:]
        if used == 0:
            return pt.copy()
        cost = pt[:, None] - self.P[d:, :used] + self.N[d:, :used]
        mins = cost.min(axis=1)
        if used < self.k:
            np.minimum(mins, pt, out=mins)
        return mins

    def bound(self, d: int, used: int, fixed: int) -> int:
        if d == self.n:
            return fixed
        return fixed + int(self.free_minima(d, used).sum()) + self.pack[d]

    def _tick(self) -> None:
        st = self.stats
        st.nodes += 1
        if st.nodes & 255 == 0:
            if self.shared is not None:
                v = self.shared.value
                if v < self.best_value:
                    self.best_value = v
            if self.deadline is not None and time.monotonic() > self.deadline:
                # every unexplored node descends from a frame still on the stack
                self.interrupt_bound = min(self.frame_bounds + [self.best_value])
                raise _Interrupted

    def _polish(self) -> None:
        by_node = [self.best[1][self.position[v]] for v in range(self.n)]
        value = improve(self.g, by_node, self.k)
        if value < self.best_value:
            self.set_incumbent(by_node, value)

    def _publish(self) -> None:
        if self.shared is not None:
            with self.shared.get_lock():
                if self.best_value < self.shared.value:
                    self.shared.value = self.best_value

    def dfs(self, d: int, used: int, fixed: int) -> None:
        self._tick()
        n = self.n
        if d == n:
            self.stats.leaves += 1
            if fixed < self.best_value:
                self.best_value = fixed
                self.best = (fixed, list(self.assign))
                if self.polish:
                    self._polish()
                self._publish()
            return
        bounding = self.bounding
        mins = self.free_minima(d, used)
        rest = int(mins.sum()) - int(mins[0]) + self.pack[d + 1]
        if bounding and fixed + int(mins[0]) + rest >= self.best_value:
            return
        pt = int(self.ptot[d])
        costs = [(pt - int(self.P[d, c]) + int(self.N[d, c]), c) for c in range(used)]
        if used < self.k:
            costs.append((pt, used))
        costs.sort()
        frames = self.frame_bounds
        frames.append(fixed + int(mins[0]) + rest)
        top = len(frames) - 1
        try:
            for cost, c in costs:
                # children come in ascending cost: this bounds all that remain
                frames[top] = fixed + cost + rest
                if bounding and frames[top] >= self.best_value:
                    break
                self.apply(d, c)
                try:
                    self.dfs(d + 1, used + (c == used), fixed + cost)
                finally:
                    self.undo(d, c)
        finally:
            frames.pop()

    def run(self, prefix=(), deadline=None) -> bool:
        """Search below ``prefix`` (clusters for the first positions). True if completed."""
        self.deadline = deadline
        used, fixed = 0, 0
        for p, c in enumerate(prefix):
            pt = int(self.ptot[p])
            fixed += pt - int(self.P[p, c]) + int(self.N[p, c]) if c < used else pt
            self.apply(p, c)
            used = max(used, c + 1)
        limit = sys.getrecursionlimit()
        if limit < self.n + 500:
            sys.setrecursionlimit(self.n + 500)
        try:
            self.dfs(len(prefix), used, fixed)
            return True
        except _Interrupted:
            return False
        finally:
            for p in range(len(prefix) - 1, -1, -1):
                if self.assign[p] >= 0:
                    self.undo(p, prefix[p])

    def open_bound(self) -> int:
        """Lower bound over everything still unexplored after an interruption."""
        return min(self.interrupt_bound, self.best_value)

    def partition(self) -> Partition:
        _, by_pos = self.best
        return canonicalize([by_pos[self.position[v]] for v in range(self.n)])

    def root_bound(self) -> int:
        return self.bound(0, 0, 0)


# process-pool plumbing; module globals so forked workers inherit them
_worker_search: _Search | None = None


def _worker_init(g, k, shared, initial):
    global _worker_search
    s = _Search(g, k)
    s.shared = shared
    s.best_value = initial
    _worker_search = s


def _worker_run(prefix, deadline):
    s = _worker_search
    s.best_value = min(s.best_value, s.shared.value)
    s.best = None
    before_nodes, before_leaves = s.stats.nodes, s.stats.leaves
    s.frame_bounds = []
    done = s.run(prefix, deadline)
    lb = None if done else s.open_bound()
    found = None if s.best is None else s.best
    return done, lb, found, s.stats.nodes - before_nodes, s.stats.leaves - before_leaves


def _frontier(s: _Search, incumbent: int, target: int):
    """Breadth-first expansion of the top levels into subproblem prefixes."""
    level = [((), 0, 0)]
    d = 0
    while level and len(level) < target and d < s.n:
        nxt = []
        for prefix, used, fixed in level:
            for p, c in enumerate(prefix):
                s.apply(p, c)
            pt = int(s.ptot[d])
            options = [(pt - int(s.P[d, c]) + int(s.N[d, c]), c) for c in range(used)]
            if used < s.k:
                options.append((pt, used))
            for cost, c in sorted(options):
                s.apply(d, c)
                nu = max(used, c + 1)
                if s.bound(d + 1, nu, fixed + cost) < incumbent:
                    nxt.append((prefix + (c,), nu, fixed + cost))
                s.undo(d, c)
            for p in range(len(prefix) - 1, -1, -1):
                s.undo(p, prefix[p])
        level = nxt
        d += 1
    return level


def _default_restarts(g: SignedGraph) -> int:
    # restarts are cheap on small graphs and a tight incumbent prunes hard
    return int(np.clip(2_000_000 // (40 * (g.m + g.n) + 1), 5, 50))


def _solve(
    g: SignedGraph,
    k: int | None,
    time_limit: float | None,
    warm_start: Partition | None,
    threads: int,
    bounding: bool,
    heuristic: HeuristicConfig | None,
    use_heuristic: bool = True,
) -> SolveResult:
    start = time.monotonic()
    n = g.n
    cap = n if k is None else k
    if n == 0:
        return SolveResult(0, Partition(()), 0, OPTIMAL, k_limit=k)
    deadline = None if time_limit is None else start + time_limit

    s = _Search(g, cap, bounding=bounding)
    if warm_start is not None:
        if len(warm_start) != n:
            raise ValueError("warm start does not match the graph")
        if warm_start.cluster_count > cap:
            log.warning("warm start uses %d clusters > %d; ignored", warm_start.cluster_count, cap)
            warm_start = None
    heuristic_value = None
    if bounding and warm_start is not None:
        s.set_incumbent(warm_start.assignment, frustration_total(g, warm_start))
    if bounding and use_heuristic:
        cfg = heuristic or HeuristicConfig(max_clusters=cap, restarts=_default_restarts(g))
        if cfg.max_clusters != cap:
            cfg = HeuristicConfig(cap, cfg.restarts, cfg.max_sweeps, cfg.rng_seed)
        heuristic_value, hp = local_search(g, cfg, warm_start)
        s.set_incumbent(hp.assignment, heuristic_value)
    root = s.root_bound()
    log.debug("n=%d k=%s root bound %d, incumbent %s", n, k, root, s.best_value)

    if bounding and root >= s.best_value:
        done, lb = True, s.best_value
    elif threads > 1 and n > 12:
        done, lb = _solve_parallel(s, g, cap, threads, deadline)
    else:
        done = s.run((), deadline)
        lb = s.best_value if done else s.open_bound()

    if s.best is None:
        # interrupted before any leaf without a heuristic start
        fallback = greedy_partition(g, cap)
        s.set_incumbent(fallback, frustration_total(g, fallback))
    value = s.best_value
    partition = s.partition()
    assert frustration_total(g, partition) == value
    return SolveResult(
        optimum=int(value),
        partition=partition,
        lower_bound=int(value if done else max(lb, root)),
        status=OPTIMAL if done else FEASIBLE_BOUND,
        nodes_explored=s.stats.nodes,
        leaves=s.stats.leaves,
        wall_time=time.monotonic() - start,
        k_limit=k,
        root_bound=min(root, value),
        heuristic_value=heuristic_value,
    )


def _solve_parallel(s: _Search, g: SignedGraph, cap: int, threads: int, deadline):
    prefixes = _frontier(s, s.best_value, 8 * threads)
    if not prefixes:
        return True, s.best_value
    ctx = mp.get_context("fork")
    shared = ctx.Value("q", int(s.best_value))
    done_all, bounds = True, []
    with ProcessPoolExecutor(threads, mp_context=ctx, initializer=_worker_init,
                             initargs=(g, cap, shared, int(s.best_value))) as pool:
        futures = [pool.submit(_worker_run, p, deadline) for p, _, _ in prefixes]
        for f in futures:
            done, lb, found, nodes, leaves = f.result()
            s.stats.nodes += nodes
            s.stats.leaves += leaves
            if found is not None and found[0] < s.best_value:
                s.best_value, s.best = found[0], found
            if not done:
                done_all = False
                bounds.append(lb)
    lb = min(bounds + [s.best_value])
    return done_all, lb


def solve_k(
    g: SignedGraph,
    k: int,
    time_limit: float | None = None,
    warm_start: Partition | None = None,
    threads: int = 1,
    bounding: bool = True,
    heuristic: HeuristicConfig | None = None,
    use_heuristic: bool = True,
) -> SolveResult:
    """Optimal partition into at most ``k`` clusters.

    ``bounding=False`` disables all pruning and visits every canonical
    partition; it exists for testing the enumeration.
    """
    if not 1 <= k <= max(g.n, 1):
        raise BadK(f"k={k} outside 1..{g.n}")
    return _solve(g, k, time_limit, warm_start, threads, bounding, heuristic, use_heuristic)


def solve_unbounded(
    g: SignedGraph,
    time_limit: float | None = None,
    warm_start: Partition | None = None,
    threads: int = 1,
    heuristic: HeuristicConfig | None = None,
    use_heuristic: bool = True,
) -> SolveResult:
    """Optimal partition with no limit on the number of clusters."""
    return _solve(g, None, time_limit, warm_start, threads, True, heuristic, use_heuristic)


@dataclass
class StagnationCurve:
    values: dict[int, int]
    k_min_star: int | None  # None: no k <= k_max reaches C(G)
    c_of_g: int
    k_max: int
    status: str = OPTIMAL
    results: dict = field(default_factory=dict, repr=False)

    @property
    def stagnated(self) -> bool:
        return self.k_min_star is not None

    def k_min_star_label(self) -> int | str:
        return self.k_min_star if self.k_min_star is not None else f">{self.k_max}"


def stagnation_curve(
    g: SignedGraph,
    k_max: int,
    time_limit: float | None = None,
    threads: int = 1,
    heuristic: HeuristicConfig | None = None,
) -> StagnationCurve:
    """C_k(G) for k = 1..k_max, C(G), and the smallest k where the two meet.

    ``time_limit`` applies to each solve separately.
    """
    if not 1 <= k_max <= max(g.n, 1):
        raise BadK(f"k_max={k_max} outside 1..{g.n}")
    values: dict[int, int] = {}
    results: dict = {}
    warm = None
    status = OPTIMAL
    for k in range(1, k_max + 1):
        r = solve_k(g, k, time_limit, warm, threads, heuristic=heuristic)
        values[k] = r.optimum
        results[k] = r
        warm = r.partition
        if not r.is_optimal:
            status = FEASIBLE_BOUND
    r = solve_unbounded(g, time_limit, warm, threads, heuristic=heuristic)
    results[None] = r
    if not r.is_optimal:
        status = FEASIBLE_BOUND
    c_of_g = r.optimum
    k_min_star = next((k for k in sorted(values) if values[k] == c_of_g), None)
    return StagnationCurve(values, k_min_star, c_of_g, k_max, status, results)
