"""Loader for the US House replication files, when they are available locally.

Expected layout of the directory named by ``$CLUSTERABILITY_HOUSE_DATA``::

    clusters-house.csv         session, legislator, then one cluster column per k (2..7)
    H<session>.csv             signed edge list (source,target,sign), labels = legislator names
    attributes-<session>.csv   node,party,ideology,effectiveness   (optional)

Nothing is downloaded; the README shows how to export the networks from the
published R workspace.
"""
from __future__ import annotations

import csv
import os
import re
from pathlib import Path

from .analysis import ClusterRow, cluster_stats, edge_mix, label_coalitions, pooled_ratio
from .errors import SizeMismatch
from .frustration import frustration_total
from .io import load_graph
from .signed_graph import Partition, SignedGraph, canonicalize

ENV_VAR = "CLUSTERABILITY_HOUSE_DATA"
SESSIONS = tuple(range(97, 116))


def data_dir() -> Path | None:
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return None
    path = Path(raw)
    return path if (path / "clusters-house.csv").is_file() else None


def read_published_partitions(path) -> dict[int, dict[int, dict[str, str]]]:
    """``{session: {k: {legislator: cluster}}}`` from clusters-house.csv."""
    out: dict[int, dict[int, dict[str, str]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        kcols = {}
        for col, name in enumerate(header[2:], 2):
            m = re.search(r"(\d+)", name)
            if m:
                kcols[col] = int(m.group(1))
        for row in reader:
            if not row:
                continue
            session, name = int(float(row[0])), row[1].strip()
            per_k = out.setdefault(session, {})
            for col, k in kcols.items():
                value = row[col].strip()
                if value and value.upper() != "NA":
                    per_k.setdefault(k, {})[name] = value
    return out


def load_session(directory, session: int) -> SignedGraph:
    directory = Path(directory)
    attrs = directory / f"attributes-{session}.csv"
    return load_graph(directory / f"H{session}.csv", attrs if attrs.is_file() else None)


def published_partition(g: SignedGraph, clusters: dict[str, str]) -> Partition:
    """Map a legislator -> cluster column onto ``g``; unlisted isolates get their own clusters."""
    labels = []
    for i, name in enumerate(g.nodes):
        if name in clusters:
            labels.append(("c", clusters[name]))
        elif not g.neighbors[i]:
            labels.append(("isolate", name))
        else:
            raise SizeMismatch(f"legislator {name!r} has edges but no published cluster")
    return canonicalize(labels)


def published_indices(g: SignedGraph, per_k: dict[int, dict[str, str]]) -> dict[int, int]:
    """Frustration of each published k-partition of one session."""
    return {k: frustration_total(g, published_partition(g, clusters)) for k, clusters in sorted(per_k.items())}


def coalitions(g: SignedGraph, p: Partition) -> dict[str, ClusterRow]:
    """Stats of a 3-partition keyed by coalition name (L, C, S)."""
    rows = cluster_stats(g, p)
    names = label_coalitions(rows)
    return {names[r.cluster]: r for r in rows}


def pooled_ratios(sessions, attribution: str, how: str) -> dict[str, float | None]:
    """Negative:positive ratio of the splinter (``S``) and traditional (``LC``) coalitions.

    ``sessions`` yields ``(graph, 3-partition)`` pairs; counts are pooled
    across all of them.
    """
    splinter, traditional = [], []
    for g, p in sessions:
        names = label_coalitions(cluster_stats(g, p))
        for row in edge_mix(g, p, attribution=attribution):
            (splinter if names[row.cluster] == "S" else traditional).append(row)
    return {"S": pooled_ratio(splinter, how), "LC": pooled_ratio(traditional, how)}
