"""Command-line entry point: ``clusterability <command> ...``.

Exit codes: 0 success, 1 input/validation error, 2 solve interrupted by the
time limit (the incumbent is still written).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import analysis, io, milp
from .errors import ClusterabilityError
from .exact import OPTIMAL, SolveResult, solve_k, solve_unbounded, stagnation_curve
from .frustration import all_triples, count_frustration
from .heuristic import HeuristicConfig
from .signed_graph import SignedGraph, attribute_partition

DEFAULT_SEED = 20211

log = logging.getLogger("clusterability")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("edges", help="edge-list CSV (source,target,sign)")
    p.add_argument("--out", help="output prefix (default: <edges stem>.<command>)")
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--deterministic", action="store_true",
                   help="single worker, reproducible partition; omits wall_time from JSON")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--warm-start", metavar="FILE", help="partition CSV used as the first incumbent")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="heuristic RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clusterability",
                                     description="Optimal partitions of signed networks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-k", help="optimal partition into at most K clusters")
    _add_solver_flags(p)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("solve", help="optimal partition, any number of clusters")
    _add_solver_flags(p)

    p = sub.add_parser("curve", help="C_k for k=1..K, C(G) and the point of stagnation")
    _add_solver_flags(p)
    p.add_argument("--k-max", type=int, required=True)

    p = sub.add_parser("evaluate", help="frustration of a given partition")
    p.add_argument("edges")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--partition", help="partition CSV (node,cluster)")
    src.add_argument("--by-attribute", metavar="NAME", help="partition by a categorical attribute")
    p.add_argument("--attributes", help="attribute CSV (needed with --by-attribute)")
    p.add_argument("--column", default="cluster", help="cluster column of the partition CSV")
    p.add_argument("--out", help="per-edge classification CSV")

    p = sub.add_parser("export", help="write the binary program in LP format")
    p.add_argument("edges")
    p.add_argument("--model", choices=[milp.EQ1, milp.EQ2], required=True)
    p.add_argument("--k", type=int, help="cluster count (eq1 only)")
    p.add_argument("--all-triples", action="store_true",
                   help="eq2: transitivity rows on every triple, not only connected triads")
    p.add_argument("--out", required=True, help="LP file to write")

    p = sub.add_parser("import", help="read a solver solution back into a partition")
    p.add_argument("edges")
    p.add_argument("solution")
    p.add_argument("--model", choices=[milp.EQ1, milp.EQ2], required=True)
    p.add_argument("--out", help="partition CSV to write")

    p = sub.add_parser("stats", help="coalition composition reports")
    p.add_argument("edges")
    p.add_argument("--attributes", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--column", default="cluster")
    p.add_argument("--attribution", choices=analysis.ATTRIBUTIONS, default=analysis.ENDPOINT)
    p.add_argument("--out", help="output prefix (default: partition stem)")
    return parser


def _prefix(args, suffix: str) -> Path:
    if args.out:
        return Path(args.out)
    return Path(Path(args.edges).stem + "." + suffix)


def _summary(g: SignedGraph, r: SolveResult, label: str) -> str:
    gap = "" if r.is_optimal else f" (best bound {r.lower_bound})"
    return (f"{label}: {r.optimum} frustrated edges{gap}, status {r.status}, "
            f"{r.partition.cluster_count} clusters, {r.nodes_explored} search nodes, "
            f"{r.wall_time:.2f}s  [n={g.n} m={g.m} m+={g.m_pos} m-={g.m_neg}]")


def _record(g: SignedGraph, r: SolveResult, args) -> dict:
    rec = r.as_record()
    rec.update(n=g.n, m=g.m, m_pos=g.m_pos, m_neg=g.m_neg, seed=args.seed)
    if args.deterministic:
        rec.pop("wall_time")
    return rec


def _solver_setup(args):
    g = io.load_graph(args.edges)
    threads = 1 if args.deterministic else max(1, args.threads)
    warm = io.read_partition(args.warm_start, g) if args.warm_start else None
    return g, threads, warm


def cmd_solve(args) -> int:
    g, threads, warm = _solver_setup(args)
    cap = args.k if args.command == "solve-k" else None
    heur = HeuristicConfig(max_clusters=cap, restarts=20, rng_seed=args.seed)
    if args.command == "solve-k":
        r = solve_k(g, args.k, args.time_limit, warm, threads, heuristic=heur)
        label, suffix = f"C_{args.k}", f"k{args.k}"
    else:
        r = solve_unbounded(g, args.time_limit, warm, threads, heuristic=heur)
        label, suffix = "C", "solve"
    prefix = _prefix(args, suffix)
    io.write_partition(f"{prefix}.partition.csv", g, r.partition)
    io.write_json(f"{prefix}.json", _record(g, r, args))
    print(_summary(g, r, label))
    return 0 if r.status == OPTIMAL else 2


def cmd_curve(args) -> int:
    g, threads, _ = _solver_setup(args)
    heur = HeuristicConfig(restarts=20, rng_seed=args.seed)
    curve = stagnation_curve(g, args.k_max, args.time_limit, threads, heuristic=heur)
    prefix = _prefix(args, "curve")
    best = curve.results[curve.k_min_star] if curve.stagnated else curve.results[None]
    io.write_partition(f"{prefix}.partition.csv", g, best.partition)
    rec = {
        "values": {str(k): v for k, v in curve.values.items()},
        "c_of_g": curve.c_of_g,
        "k_min_star": curve.k_min_star_label(),
        "status": curve.status,
        "solves": {("unbounded" if k is None else str(k)): _record(g, r, args)
                   for k, r in curve.results.items()},
        "n": g.n, "m": g.m, "m_pos": g.m_pos, "m_neg": g.m_neg,
    }
    io.write_json(f"{prefix}.json", rec)
    for k, v in curve.values.items():
        flag = "" if curve.results[k].is_optimal else f"  (interrupted, bound {curve.results[k].lower_bound})"
        print(f"C_{k} = {v}{flag}")
    print(f"C(G) = {curve.c_of_g}, k*_min = {curve.k_min_star_label()}, status {curve.status}")
    return 0 if curve.status == OPTIMAL else 2


def cmd_evaluate(args) -> int:
    if args.by_attribute:
        if not args.attributes:
            raise ClusterabilityError("--by-attribute needs --attributes")
        g = io.load_graph(args.edges, args.attributes)
        p = attribute_partition(g, args.by_attribute)
    else:
        g = io.load_graph(args.edges, args.attributes)
        p = io.read_partition(args.partition, g, args.column)
    report = count_frustration(g, p)
    internal = sum(report.per_cluster_internal_negative.values())
    print(f"frustrated edges: {report.total} ({report.inter_cluster_positive} positive between clusters, "
          f"{internal} negative within clusters) over {p.cluster_count} clusters")
    out = args.out or Path(args.edges).stem + ".frustration.csv"
    io.write_frustration(out, g, p, report)
    return 0


def cmd_export(args) -> int:
    g = io.load_graph(args.edges)
    with open(args.out, "w", encoding="utf-8") as fh:
        if args.model == milp.EQ1:
            if args.k is None:
                raise ClusterabilityError("--model eq1 needs --k")
            dims = milp.write_eq1(g, args.k, fh)
        else:
            triads = list(all_triples(g.n)) if args.all_triples else None
            dims = milp.write_eq2(g, fh, triads)
    print(f"{args.model}: {dims.binaries} binary variables, {dims.constraints} constraints -> {args.out}")
    return 0


def cmd_import(args) -> int:
    g = io.load_graph(args.edges)
    text = Path(args.solution).read_text(encoding="utf-8")
    p, objective = milp.import_solution(g, args.model, text)
    if args.out:
        io.write_partition(args.out, g, p)
    print(f"objective {objective} verified, {p.cluster_count} clusters")
    return 0


def cmd_stats(args) -> int:
    g = io.load_graph(args.edges, args.attributes)
    p = io.read_partition(args.partition, g, args.column)
    analysis.require_attributes(g, ["party", "ideology", "effectiveness"])
    rows = analysis.cluster_stats(g, p)
    mix = analysis.edge_mix(g, p, attribution=args.attribution)
    prefix = Path(args.out) if args.out else Path(Path(args.partition).stem)
    io.write_cluster_stats(f"{prefix}.clusters.csv", rows)
    io.write_edge_mix(f"{prefix}.edgemix.csv", mix)
    for r in rows:
        print(f"cluster {r.cluster}: size {r.size}, median ideology {r.median_ideology:.2f}, "
              f"mean effectiveness {r.mean_effectiveness:.2f}")
    return 0


COMMANDS = {
    "solve-k": cmd_solve,
    "solve": cmd_solve,
    "curve": cmd_curve,
    "evaluate": cmd_evaluate,
    "export": cmd_export,
    "import": cmd_import,
    "stats": cmd_stats,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ClusterabilityError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
