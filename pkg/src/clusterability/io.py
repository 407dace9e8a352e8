"""CSV readers and writers for edge lists, node attributes, partitions and reports."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping

from .analysis import ClusterRow, EdgeMixRow
from .errors import BadSign, GraphError, SizeMismatch
from .frustration import FrustrationReport
from .signed_graph import Partition, SignedGraph, build_graph, canonicalize

EDGE_HEADER = ["source", "target", "sign"]
ATTRIBUTE_HEADER = ["node", "party", "ideology", "effectiveness"]
PARTITION_HEADER = ["node", "cluster"]


def _rows(path, header: list[str]) -> Iterable[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [h for h in header if h not in (reader.fieldnames or [])]
        if missing:
            raise GraphError(f"{path}: header lacks {', '.join(missing)} (expected {','.join(header)})")
        yield from reader


def read_edge_list(path) -> list[tuple[str, str, int]]:
    edges = []
    for lineno, row in enumerate(_rows(path, EDGE_HEADER), 2):
        sign = row["sign"].strip()
        if sign not in ("1", "-1"):
            raise BadSign(f"{path}:{lineno}: sign must be 1 or -1, got {sign!r}")
        edges.append((row["source"].strip(), row["target"].strip(), int(sign)))
    return edges


def _float_or_none(raw: str | None) -> float | None:
    raw = (raw or "").strip()
    if raw == "" or raw.upper() == "NA":
        return None
    return float(raw)


def read_attributes(path) -> dict[str, dict[str, Any]]:
    attrs = {}
    for row in _rows(path, ATTRIBUTE_HEADER):
        party = (row["party"] or "").strip() or None
        attrs[row["node"].strip()] = {
            "party": party,
            "ideology": _float_or_none(row["ideology"]),
            "effectiveness": _float_or_none(row["effectiveness"]),
        }
    return attrs


def load_graph(edges_path, attributes_path=None) -> SignedGraph:
    """Edge list plus optional attributes. Attribute-only nodes become isolates."""
    edges = read_edge_list(edges_path)
    if attributes_path is None:
        return build_graph(edges)
    attrs = read_attributes(attributes_path)
    seen = dict.fromkeys(label for a, b, _ in edges for label in (a, b))
    nodes = list(seen) + [label for label in attrs if label not in seen]
    return build_graph(edges, nodes=nodes, attributes=attrs)


def write_edge_list(path, g: SignedGraph) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(EDGE_HEADER)
        for i, j, s in g.edges:
            w.writerow([g.nodes[i], g.nodes[j], s])


def write_partition(path, g: SignedGraph, p: Partition) -> None:
    p = canonicalize(p)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(PARTITION_HEADER)
        for label, c in zip(g.nodes, p):
            w.writerow([label, c])


def read_partition(path, g: SignedGraph, column: str = "cluster") -> Partition:
    """Partition over ``g``'s nodes. Labels must match the graph's node set exactly."""
    mapping = {}
    for row in _rows(path, ["node", column]):
        raw = (row[column] or "").strip()
        mapping[row["node"].strip()] = raw
    extra = set(mapping) - set(g.nodes)
    absent = [label for label in g.nodes if label not in mapping]
    if extra or absent:
        raise SizeMismatch(
            f"{path}: node sets differ ({len(absent)} graph node(s) missing, {len(extra)} unknown label(s))"
        )
    return canonicalize([mapping[label] for label in g.nodes])


def write_frustration(path, g: SignedGraph, p: Partition, report: FrustrationReport) -> None:
    reasons = {(i, j): r for i, j, _, r in report.frustrated_edges}
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["source", "target", "sign", "frustrated", "reason"])
        for i, j, s in g.edges:
            reason = reasons.get((i, j), "")
            w.writerow([g.nodes[i], g.nodes[j], s, int(bool(reason)), reason])


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    if math.isinf(x):
        return "inf"
    return f"{x:.6g}"


def write_cluster_stats(path, rows: Iterable[ClusterRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["cluster", "size", "median_ideology", "mean_effectiveness"])
        for r in rows:
            w.writerow([r.cluster, r.size, _fmt(r.median_ideology), _fmt(r.mean_effectiveness)])


def write_edge_mix(path, rows: Iterable[EdgeMixRow]) -> None:
    """0/0 fractions are written as empty fields."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["cluster", "neg_pos_ratio", "frac_neg_copartisan", "frac_pos_copartisan"])
        for r in rows:
            w.writerow([r.cluster, _fmt(r.negative_to_positive_ratio),
                        _fmt(r.fraction_negative_copartisan), _fmt(r.fraction_positive_copartisan)])


def write_json(path, record: Mapping[str, Any]) -> None:
    Path(path).write_text(json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8")
