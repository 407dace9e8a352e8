"""Optimal partitioning of signed networks by frustration (generalized balance)."""
from .errors import (
    BadK, BadSign, ClusterabilityError, DuplicateEdge, InconsistentAssignment, MissingAttribute,
    ObjectiveMismatch, SelfLoop, SizeMismatch, TooLarge, TransitivityViolation,
)
from .exact import SolveResult, StagnationCurve, solve_k, solve_unbounded, stagnation_curve
from .frustration import FrustrationReport, check_transitivity, count_frustration, eq2_objective
from .heuristic import HeuristicConfig, local_search
from .signed_graph import (
    Partition, SignedGraph, TriadSet, attribute_partition, build_graph, canonicalize, connected_triads,
)

__version__ = "0.1.0"
