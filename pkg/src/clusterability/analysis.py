"""Coalition composition: sizes, ideology, effectiveness and edge mix per cluster."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable

from .signed_graph import Partition, SignedGraph, canonicalize

ENDPOINT = "endpoint"
EDGE = "edge"
ATTRIBUTIONS = (ENDPOINT, EDGE)


@dataclass(frozen=True)
class ClusterRow:
    cluster: int
    size: int
    median_ideology: float
    mean_effectiveness: float
    internal_negative: int
    external_positive: int
    internal_positive: int = 0
    external_negative: int = 0


@dataclass(frozen=True)
class EdgeMixRow:
    cluster: int
    positive: int
    negative: int
    positive_copartisan: int
    negative_copartisan: int

    @property
    def negative_to_positive_ratio(self) -> float | None:
        return _ratio(self.negative, self.positive)

    @property
    def fraction_negative_copartisan(self) -> float | None:
        return _ratio(self.negative_copartisan, self.negative)

    @property
    def fraction_positive_copartisan(self) -> float | None:
        return _ratio(self.positive_copartisan, self.positive)


def _ratio(num: int, den: int) -> float | None:
    """``num / den``; 0/0 is undefined (None), x/0 is infinite."""
    if den == 0:
        return None if num == 0 else math.inf
    return num / den


def _members(g: SignedGraph, p: Partition) -> dict[int, list[int]]:
    c = canonicalize(p).assignment
    groups: dict[int, list[int]] = {}
    for i in range(g.n):
        if g.neighbors[i]:  # isolates carry no information about coalitions
            groups.setdefault(c[i], []).append(i)
    return dict(sorted(groups.items()))


def cluster_stats(g: SignedGraph, p: Partition) -> list[ClusterRow]:
    """One row per cluster holding at least one non-isolated node.

    Medians of even-sized clusters average the two middle values.
    """
    if len(p) != g.n:
        raise ValueError(f"partition has {len(p)} entries, graph has {g.n} nodes")
    c = canonicalize(p).assignment
    counts = {}
    for i, j, s in g.edges:
        for a in (c[i], c[j]):
            counts.setdefault(a, [0, 0, 0, 0])  # int+, int-, ext+, ext-
        if c[i] == c[j]:
            counts[c[i]][0 if s > 0 else 1] += 1
        else:
            for a in (c[i], c[j]):
                counts[a][2 if s > 0 else 3] += 1
    rows = []
    for cl, members in _members(g, p).items():
        ideology = [float(g.attribute(i, "ideology")) for i in members]
        effectiveness = [float(g.attribute(i, "effectiveness")) for i in members]
        ip, ineg, ep, en = counts.get(cl, (0, 0, 0, 0))
        rows.append(ClusterRow(
            cluster=cl,
            size=len(members),
            median_ideology=statistics.median(ideology),
            mean_effectiveness=statistics.fmean(effectiveness),
            internal_negative=ineg,
            external_positive=ep,
            internal_positive=ip,
            external_negative=en,
        ))
    return rows


def edge_mix(g: SignedGraph, p: Partition, attribute: str = "party",
             attribution: str = ENDPOINT) -> list[EdgeMixRow]:
    """Positive/negative edge counts per coalition, and how many are co-partisan.

    ``endpoint`` attribution counts an edge once for every endpoint inside the
    coalition (an internal edge counts twice: the sum of member degrees).
    ``edge`` attribution counts each incident edge once per coalition.
    """
    if attribution not in ATTRIBUTIONS:
        raise ValueError(f"attribution must be one of {ATTRIBUTIONS}")
    c = canonicalize(p).assignment
    tallies: dict[int, list[int]] = {cl: [0, 0, 0, 0] for cl in _members(g, p)}
    for i, j, s in g.edges:
        pi, pj = g.attribute(i, attribute), g.attribute(j, attribute)
        same_party = pi == pj
        if attribution == ENDPOINT:
            targets = [c[i], c[j]]
        else:
            targets = [c[i]] if c[i] == c[j] else [c[i], c[j]]
        for cl in targets:
            t = tallies[cl]
            if s > 0:
                t[0] += 1
                t[2] += same_party
            else:
                t[1] += 1
                t[3] += same_party
    return [EdgeMixRow(cl, *t) for cl, t in sorted(tallies.items())]


def pooled_ratio(rows: Iterable[EdgeMixRow], how: str = "sum") -> float | None:
    """Negative:positive ratio pooled over several coalitions (e.g. across sessions).

    ``sum`` divides summed counts; ``mean`` averages the per-row ratios.
    """
    rows = list(rows)
    if how == "sum":
        return _ratio(sum(r.negative for r in rows), sum(r.positive for r in rows))
    if how == "mean":
        vals = [r.negative_to_positive_ratio for r in rows]
        vals = [v for v in vals if v is not None and math.isfinite(v)]
        return statistics.fmean(vals) if vals else None
    raise ValueError("how must be 'sum' or 'mean'")


def pooled_fraction(rows: Iterable[EdgeMixRow], sign: int, how: str = "sum") -> float | None:
    rows = list(rows)
    if how == "sum":
        if sign > 0:
            return _ratio(sum(r.positive_copartisan for r in rows), sum(r.positive for r in rows))
        return _ratio(sum(r.negative_copartisan for r in rows), sum(r.negative for r in rows))
    vals = [r.fraction_positive_copartisan if sign > 0 else r.fraction_negative_copartisan for r in rows]
    vals = [v for v in vals if v is not None]
    return statistics.fmean(vals) if vals else None


def label_coalitions(rows: list[ClusterRow]) -> dict[int, str]:
    """Name the clusters of a 3-partition: S the smallest, L/C the others by median ideology."""
    if len(rows) != 3:
        raise ValueError(f"expected 3 non-empty coalitions, got {len(rows)}")
    by_size = sorted(rows, key=lambda r: (r.size, r.cluster))
    splinter, rest = by_size[0], by_size[1:]
    liberal, conservative = sorted(rest, key=lambda r: r.median_ideology)
    return {liberal.cluster: "L", conservative.cluster: "C", splinter.cluster: "S"}


def require_attributes(g: SignedGraph, names: Iterable[str]) -> None:
    """Raise MissingAttribute unless every non-isolated node has every attribute."""
    for i in range(g.n):
        if g.neighbors[i]:
            for name in names:
                g.attribute(i, name)

