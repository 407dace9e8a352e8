"""Write the two binary programs in CPLEX LP format and read solver solutions back.

k-partition model (``eq1``)::

    min  sum f_i_j
    s.t. sum_c x_i_c = 1                      every node i
         f_i_j - x_i_c + x_j_c >= 0           positive edge (i, j), every c
         f_i_j - x_i_c - x_j_c >= -1          negative edge (i, j), every c

Pairwise model (``eq2``)::

    min  m+ - sum_{positive} y_i_j + sum_{negative} y_i_j
    s.t. y_i_j + y_i_l - y_j_l <= 1  (and the two rotations)   connected triad (i, j, l)

Node indices in variable names are the graph's 0-based indices; the header
comment lists the index-to-label mapping. Rows are named ``assign_i``,
``pos_i_j_c``/``neg_i_j_c`` and ``tri_i_j_l_r`` (r = 0, 1, 2).

Solutions are plain text, one ``name value`` pair per line; ``#`` lines are
comments except ``# Objective value = V``, which reports the objective.
Variables absent from a solution read as 0.
"""
from __future__ import annotations

import io
import re
from dataclasses import dataclass
from typing import Iterable, TextIO

from .errors import BadK, InconsistentAssignment, ObjectiveMismatch, SolutionError, TransitivityViolation
from .frustration import frustration_total
from .signed_graph import Partition, SignedGraph, canonicalize, connected_triads

EQ1 = "eq1"
EQ2 = "eq2"
TOLERANCE = 1e-6
_TERMS_PER_LINE = 8


@dataclass(frozen=True)
class ModelDimensions:
    binaries: int
    constraints: int


def eq1_dimensions(n: int, m: int, k: int) -> ModelDimensions:
    return ModelDimensions(n * k + m, m * k + n)


def eq2_dimensions(n: int, triads: int) -> ModelDimensions:
    return ModelDimensions(n * (n - 1) // 2, 3 * triads)


def _x(i: int, c: int) -> str:
    return f"x_{i}_{c}"


def _f(i: int, j: int) -> str:
    return f"f_{i}_{j}"


def _yname(i: int, j: int) -> str:
    return f"y_{min(i, j)}_{max(i, j)}"


def _header(out: TextIO, g: SignedGraph, lines: list[str]) -> None:
    for line in lines:
        out.write(f"\\ {line}\n")
    out.write(f"\\ n = {g.n}, m = {g.m} (m+ = {g.m_pos}, m- = {g.m_neg})\n")
    for i, label in enumerate(g.nodes):
        out.write(f"\\ node {i} = {label}\n")


def _write_terms(out: TextIO, lead: str, terms: list[str]) -> None:
    """Objective expression wrapped over several lines."""
    if not terms:
        out.write(f"{lead} 0\n")
        return
    for start in range(0, len(terms), _TERMS_PER_LINE):
        chunk = " ".join(terms[start:start + _TERMS_PER_LINE])
        if start == 0:
            out.write(f"{lead} {chunk.lstrip('+ ')}\n")
        else:
            out.write(f"   {chunk}\n")


def _write_binaries(out: TextIO, names) -> None:
    out.write("Binaries\n")
    for name in names:
        out.write(f" {name}\n")
    out.write("End\n")


def write_eq1(g: SignedGraph, k: int, out: TextIO) -> ModelDimensions:
    if not 1 <= k <= max(g.n, 1):
        raise BadK(f"k={k} outside 1..{g.n}")
    _header(out, g, [
        f"k-partition model, at most k = {k} clusters",
        "x_i_c = 1 iff node i is in cluster c (c = 0..k-1)",
        "f_i_j = 1 iff edge (i, j) is frustrated; objective = number of frustrated edges",
    ])
    out.write("Minimize\n")
    _write_terms(out, " obj:", [f"+ {_f(i, j)}" for i, j, _ in g.edges])
    out.write("Subject To\n")
    rows = 0
    for i in range(g.n):
        out.write(f" assign_{i}: " + " + ".join(_x(i, c) for c in range(k)) + " = 1\n")
        rows += 1
    for i, j, s in g.edges:
        for c in range(k):
            if s > 0:
                out.write(f" pos_{i}_{j}_{c}: {_f(i, j)} - {_x(i, c)} + {_x(j, c)} >= 0\n")
            else:
                out.write(f" neg_{i}_{j}_{c}: {_f(i, j)} - {_x(i, c)} - {_x(j, c)} >= -1\n")
            rows += 1
    names = [_x(i, c) for i in range(g.n) for c in range(k)] + [_f(i, j) for i, j, _ in g.edges]
    _write_binaries(out, names)
    return ModelDimensions(len(names), rows)


def write_eq2(g: SignedGraph, out: TextIO, triads=None) -> ModelDimensions:
    if triads is None:
        triads = connected_triads(g)
    _header(out, g, [
        "pairwise (correlation clustering) model, any number of clusters",
        "y_i_j = 1 iff nodes i < j share a cluster",
        f"objective constant {g.m_pos} = number of positive edges; objective = frustrated edges",
        f"transitivity rows over {len(triads)} triads",
    ])
    out.write("Minimize\n")
    terms = [f"{g.m_pos}"] if g.m_pos else []
    terms += [f"- {_yname(i, j)}" if s > 0 else f"+ {_yname(i, j)}" for i, j, s in g.edges]
    _write_terms(out, " obj:", terms)
    out.write("Subject To\n")
    rows = 0
    for i, j, l in triads:
        ij, il, jl = _yname(i, j), _yname(i, l), _yname(j, l)
        out.write(f" tri_{i}_{j}_{l}_0: {ij} + {il} - {jl} <= 1\n")
        out.write(f" tri_{i}_{j}_{l}_1: {ij} + {jl} - {il} <= 1\n")
        out.write(f" tri_{i}_{j}_{l}_2: {il} + {jl} - {ij} <= 1\n")
        rows += 3
    names = (_yname(i, j) for i in range(g.n) for j in range(i + 1, g.n))
    _write_binaries(out, names)
    return ModelDimensions(g.n * (g.n - 1) // 2, rows)


def export_eq1(g: SignedGraph, k: int) -> str:
    buf = io.StringIO()
    write_eq1(g, k, buf)
    return buf.getvalue()


def export_eq2(g: SignedGraph) -> str:
    buf = io.StringIO()
    write_eq2(g, buf)
    return buf.getvalue()


def model_dimensions(text: str | Iterable[str]) -> ModelDimensions:
    """Count the declared binaries and constraint rows of an LP model.

    Accepts the model text or an iterable of lines (e.g. an open file).
    """
    lines = text.splitlines() if isinstance(text, str) else text
    section = None
    binaries = rows = 0
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("\\"):
            continue
        low = stripped.lower()
        if low in ("minimize", "maximize", "subject to", "binaries", "binary", "end"):
            section = low
            continue
        if section == "subject to" and ":" in stripped:
            rows += 1
        elif section in ("binaries", "binary"):
            binaries += len(stripped.split())
    return ModelDimensions(binaries, rows)


# -- solutions ---------------------------------------------------------------

_OBJ = re.compile(r"#\s*objective(?:\s+value)?\s*[=:]?\s*(\S+)", re.IGNORECASE)


def parse_solution(text: str) -> tuple[dict[str, int], float | None]:
    """Binarised variable values and the reported objective (if stated)."""
    values: dict[str, int] = {}
    objective = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _OBJ.match(line)
            if m:
                objective = float(m.group(1))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SolutionError(f"line {lineno}: expected 'name value', got {line!r}")
        name, raw = parts
        v = float(raw)
        r = round(v)
        if abs(v - r) > TOLERANCE or r not in (0, 1):
            raise SolutionError(f"line {lineno}: {name} = {raw} is not binary within {TOLERANCE}")
        values[name] = int(r)
    return values, objective


def _check_objective(reported, recomputed: int) -> None:
    if reported is not None and abs(reported - recomputed) > TOLERANCE:
        raise ObjectiveMismatch(f"reported objective {reported:g}, partition has {recomputed} frustrated edges")


def _components(n: int, pairs) -> list[int]:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    return [find(i) for i in range(n)]


def import_solution(g: SignedGraph, model_kind: str, text: str) -> tuple[Partition, int]:
    """Partition encoded by a solution to either model, with its verified objective."""
    values, reported = parse_solution(text)
    n = g.n
    if model_kind == EQ1:
        clusters: dict[int, list[int]] = {i: [] for i in range(n)}
        pat = re.compile(r"x_(\d+)_(\d+)$")
        for name, v in values.items():
            m = pat.match(name)
            if m and v:
                i, c = int(m.group(1)), int(m.group(2))
                if i >= n:
                    raise SolutionError(f"{name} refers to node {i}; graph has {n} nodes")
                clusters[i].append(c)
        bad = {i: cs for i, cs in clusters.items() if len(cs) != 1}
        if bad:
            i, cs = next(iter(bad.items()))
            raise InconsistentAssignment(
                f"{len(bad)} node(s) not in exactly one cluster, e.g. node {i} ({g.nodes[i]}) in {sorted(cs)}"
            )
        p = canonicalize([clusters[i][0] for i in range(n)])
        if reported is None:
            reported = sum(values.get(_f(i, j), 0) for i, j, _ in g.edges)
    elif model_kind == EQ2:
        pat = re.compile(r"y_(\d+)_(\d+)$")
        linked = []
        for name, v in values.items():
            m = pat.match(name)
            if m and v:
                i, j = int(m.group(1)), int(m.group(2))
                if max(i, j) >= n:
                    raise SolutionError(f"{name} refers to a node outside the graph")
                linked.append((i, j))
        # unlinked nodes stay apart: the finest partition consistent with y
        p = canonicalize(_components(n, linked))
        ones = {(min(i, j), max(i, j)) for i, j in linked}
        for members in p.clusters():
            size = len(members)
            if size * (size - 1) // 2 != sum(1 for a in members for b in members if a < b and (a, b) in ones):
                missing = next((a, b) for a in members for b in members if a < b and (a, b) not in ones)
                raise TransitivityViolation(
                    f"y is not transitive: nodes {missing[0]} and {missing[1]} are linked through "
                    f"other nodes but y_{missing[0]}_{missing[1]} = 0"
                )
        if reported is None:
            reported = sum((1 - values.get(_yname(i, j), 0)) if s > 0 else values.get(_yname(i, j), 0)
                           for i, j, s in g.edges)
    else:
        raise ValueError(f"unknown model kind {model_kind!r}")
    total = frustration_total(g, p)
    _check_objective(reported, total)
    return p, total


def encode_solution(g: SignedGraph, model_kind: str, p: Partition, k: int | None = None) -> str:
    """Solution text a solver would report for partition ``p``."""
    c = canonicalize(p).assignment
    total = frustration_total(g, c)
    lines = [f"# Objective value = {total}"]
    if model_kind == EQ1:
        k = k if k is not None else max(c, default=-1) + 1
        if max(c, default=-1) >= k:
            raise BadK(f"partition uses {max(c) + 1} clusters > k = {k}")
        for i in range(g.n):
            lines.extend(f"{_x(i, cl)} {int(c[i] == cl)}" for cl in range(k))
        for i, j, s in g.edges:
            lines.append(f"{_f(i, j)} {int((c[i] == c[j]) != (s > 0))}")
    elif model_kind == EQ2:
        for i in range(g.n):
            lines.extend(f"{_yname(i, j)} {int(c[i] == c[j])}" for j in range(i + 1, g.n))
    else:
        raise ValueError(f"unknown model kind {model_kind!r}")
    return "\n".join(lines) + "\n"
