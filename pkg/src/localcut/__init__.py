"""Flow-based local graph clustering.

Given a seed set in a large undirected graph, finds a nearby set of
provably low conductance by solving localized maximum-flow problems on a
source/sink-augmented graph, touching only a volume proportional to the
seed's. Ships an approximate (phase-capped Dinic) and an exact (hybrid
binary blocking flow) localized solver, binary-search improvement drivers,
routing certificates, a push/sweep seed expander, brute-force test
oracles, and a CLI.
"""

from .augmented import AugmentedGraph, build, epsilon_sigma, min_feasible_sigma
from .certify import (
    BiDemand,
    PathDecomposition,
    conn_proxy,
    decompose_paths,
    expansion_lower_bound,
    path_length_certificate,
    quotient_score,
    verify_bidemand_routing,
)
from .errors import (
    GraphFormatError,
    InvariantViolation,
    LocalCutError,
    NotACertificateError,
    ParameterError,
)
from .exact_flow import local_flow_exact
from .flow import FlowState, bfs_distances, blocking_flow, global_max_flow
from .graphio import load_graph, load_vertex_set
from .graphs import (
    Graph,
    VertexSet,
    boundary_edges,
    conductance,
    induced_subgraph,
    neighbors,
    volume,
)
from .improve import ImproveResult, local_improve, local_improve_overlap, pipeline_nibble_improve
from .local_flow import iteration_bound, local_flow
from .oracle import brute_min_conductance, brute_min_cut_value, eval_condition_41
from .seeding import ApprConfig, appr_push, sweep_cut

__version__ = "0.1.0"

__all__ = [
    "AugmentedGraph",
    "ApprConfig",
    "BiDemand",
    "FlowState",
    "Graph",
    "GraphFormatError",
    "ImproveResult",
    "InvariantViolation",
    "LocalCutError",
    "NotACertificateError",
    "ParameterError",
    "PathDecomposition",
    "VertexSet",
    "appr_push",
    "bfs_distances",
    "blocking_flow",
    "boundary_edges",
    "brute_min_conductance",
    "brute_min_cut_value",
    "build",
    "conductance",
    "conn_proxy",
    "decompose_paths",
    "epsilon_sigma",
    "eval_condition_41",
    "expansion_lower_bound",
    "global_max_flow",
    "induced_subgraph",
    "iteration_bound",
    "load_graph",
    "load_vertex_set",
    "local_flow",
    "local_flow_exact",
    "local_improve",
    "local_improve_overlap",
    "min_feasible_sigma",
    "neighbors",
    "path_length_certificate",
    "pipeline_nibble_improve",
    "quotient_score",
    "sweep_cut",
    "verify_bidemand_routing",
    "volume",
]
