"""Significant engagement community search on temporal graphs."""

from .cumulative import CumulativeGraph, Interval, build_cumulative, enumerate_intervals, shrink_left, shrink_right
from .metrics import engagement_level, temporal_conductance, temporal_density
from .search import Algorithm, CommunityResult, QuerySpec, buls_family, run_query, tdgp
from .temporal_graph import TemporalGraph, detemporalize, edge_occurrences, load_edge_list

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "CommunityResult",
    "CumulativeGraph",
    "Interval",
    "QuerySpec",
    "TemporalGraph",
    "build_cumulative",
    "buls_family",
    "detemporalize",
    "edge_occurrences",
    "engagement_level",
    "enumerate_intervals",
    "load_edge_list",
    "run_query",
    "shrink_left",
    "shrink_right",
    "tdgp",
    "temporal_conductance",
    "temporal_density",
]
