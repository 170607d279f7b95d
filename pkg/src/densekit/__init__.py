"""densekit: dense subgraph discovery via peeling, duality, and max flow.

The toolkit finds vertex subsets of maximum average degree (density):

- :func:`greedy_peel` — linear-time greedy peeling, a 2-approximation;
- :func:`greedy_pp` — iterated peeling carrying per-vertex loads, which
  converges toward the optimum and produces a duality certificate;
- :func:`exact_densest` — exact optimum via binary search over integer
  max-flow feasibility tests;
- :func:`mwu_solve` — a multiplicative-weights solver for the
  load-balancing dual, yielding a ``(1 + eps)`` upper bound;
- :func:`certify` — a-posteriori optimality certificates from loads.
"""

__version__ = "0.1.0"

from .graph import (
    DensityValue,
    DuplicateEdgeWarning,
    EmptyGraphError,
    EmptySubsetError,
    Graph,
    GraphError,
    GraphParseError,
    OracleSizeError,
    brute_force_densest,
    density,
    parse_edge_list,
    to_edge_list,
)
from .peeling import (
    GreedyPPResult,
    IterationStats,
    LoadVector,
    PeelPass,
    PeelResult,
    greedy_peel,
    greedy_pp,
    peel_iteration,
)
from .duality import (
    DualAssignment,
    DualCertificate,
    averaged_dual,
    certify,
    dual_upper_bound,
    greedy_pp_until_certified,
)
from .flow import (
    FeasibilityQuery,
    FlowNetwork,
    QueryOutcome,
    SignedGraphError,
    WeightScaleError,
    build_feasibility_network,
    exact_densest,
    max_flow,
    run_feasibility_query,
    scale_to_integer,
    to_dimacs,
)
from .mwu import MwuResult, MwuState, iteration_bound, mwu_solve, oracle_min
from .bench import ExperimentReport, convergence_report, run_bench
from .cli import run_cli
from . import generators

__all__ = [
    "DensityValue",
    "DualAssignment",
    "DualCertificate",
    "DuplicateEdgeWarning",
    "EmptyGraphError",
    "EmptySubsetError",
    "ExperimentReport",
    "FeasibilityQuery",
    "FlowNetwork",
    "Graph",
    "GraphError",
    "GraphParseError",
    "GreedyPPResult",
    "IterationStats",
    "LoadVector",
    "MwuResult",
    "MwuState",
    "OracleSizeError",
    "PeelPass",
    "PeelResult",
    "QueryOutcome",
    "SignedGraphError",
    "WeightScaleError",
    "averaged_dual",
    "brute_force_densest",
    "build_feasibility_network",
    "certify",
    "convergence_report",
    "density",
    "dual_upper_bound",
    "exact_densest",
    "generators",
    "greedy_peel",
    "greedy_pp",
    "greedy_pp_until_certified",
    "iteration_bound",
    "max_flow",
    "mwu_solve",
    "oracle_min",
    "parse_edge_list",
    "peel_iteration",
    "run_bench",
    "run_cli",
    "run_feasibility_query",
    "scale_to_integer",
    "to_dimacs",
    "to_edge_list",
]
