"""Rake-link audit toolkit.

Computes the minimum fleet size for a day timetable as a minimum path cover
of the link-feasibility DAG, evaluates five operational objectives across
grids of decision bounds, sorts sweep results into Pareto fronts and
objective-space clusters, and serves an interactive audit API for planners.
"""

from .model import (
    Bounds,
    Service,
    Timetable,
    Topology,
    ValidationError,
    validate_timetable,
    validate_topology,
)
from .feasgraph import FeasibilityGraph, LinkEdge, PairTable, build_graph, edge_feasible
from .pathcover import CoverSolution, Matching, RakeLink, brute_force_min_cover, extract_cover, max_bipartite_matching, min_fleet
from .objectives import DensityProfile, ObjectiveVector, density_profile, evaluate, peak_density
from .sweep import BoundsGrid, SweepManifest, SweepRecord, generate_grid, improvement_report, reference_grid, run_sweep
from .pareto import Cluster, FrontAssignment, dominates, find_clusters, front_minima, sort_fronts
from .demo_data import GeneratorConfig, generate

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "BoundsGrid",
    "Cluster",
    "CoverSolution",
    "DensityProfile",
    "FeasibilityGraph",
    "FrontAssignment",
    "GeneratorConfig",
    "LinkEdge",
    "Matching",
    "ObjectiveVector",
    "PairTable",
    "RakeLink",
    "Service",
    "SweepManifest",
    "SweepRecord",
    "Timetable",
    "Topology",
    "ValidationError",
    "brute_force_min_cover",
    "build_graph",
    "density_profile",
    "dominates",
    "edge_feasible",
    "evaluate",
    "extract_cover",
    "find_clusters",
    "front_minima",
    "generate",
    "generate_grid",
    "improvement_report",
    "max_bipartite_matching",
    "min_fleet",
    "peak_density",
    "reference_grid",
    "run_sweep",
    "sort_fronts",
    "validate_timetable",
    "validate_topology",
]
