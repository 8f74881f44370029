"""Community quality metrics: engagement level, temporal density, temporal conductance.

All values are exact :class:`~fractions.Fraction` objects.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Collection

from .cumulative import Interval
from .temporal_graph import TemporalGraph

INTERVAL_MODE = "interval"
FULL_MODE = "full"


class UndefinedMetricError(ValueError):
    pass


@dataclass(frozen=True)
class CommunityMetrics:
    engagement: Fraction | None
    temporal_density: Fraction | None
    temporal_conductance: Fraction | None


def _count_in(times: list[int], ts: int, te: int) -> int:
    return bisect_right(times, te) - bisect_left(times, ts)


def induced_degrees(g: TemporalGraph, vertices: Collection[int], iv: Interval) -> dict[int, int]:
    """Temporal degree of each vertex inside the induced temporal subgraph over ``iv``."""
    vs = set(vertices)
    out = {}
    for v in vs:
        d = 0
        for x, times in g.neighbor_times(v).items():
            if x in vs:
                d += _count_in(times, iv.ts, iv.te)
        out[v] = d
    return out


def engagement_level(vertices: Collection[int], iv: Interval, g: TemporalGraph, u: int) -> Fraction:
    degs = induced_degrees(g, vertices, iv)
    if u not in degs:
        raise ValueError(f"vertex {u} not in community")
    total = sum(degs.values())
    if total == 0:
        raise UndefinedMetricError("community has no temporal edges")
    return Fraction(degs[u], total)


def temporal_density(vertices: Collection[int], iv: Interval, g: TemporalGraph) -> Fraction:
    """``2|E_S| / (|S|(|S|-1)|T_S|)`` with ``|T_S|`` the inclusive interval width."""
    size = len(set(vertices))
    if size < 2:
        raise UndefinedMetricError("temporal density needs at least two vertices")
    edges = sum(induced_degrees(g, vertices, iv).values()) // 2
    return Fraction(2 * edges, size * (size - 1) * iv.width)


def _partition_counts(g: TemporalGraph, vertices: Collection[int], iv: Interval | None) -> tuple[int, int, int]:
    vs = set(vertices)
    cut = inside = outside = 0
    if iv is None:
        triples = g.edges
    else:
        lo = bisect_left(g.edges, iv.ts, key=lambda e: e[2])
        hi = bisect_right(g.edges, iv.te, key=lambda e: e[2])
        triples = g.edges[lo:hi]
    for u, v, _ in triples:
        a, b = u in vs, v in vs
        if a and b:
            inside += 1
        elif a or b:
            cut += 1
        else:
            outside += 1
    return cut, inside, outside


def temporal_conductance(
    vertices: Collection[int], iv: Interval, g: TemporalGraph, mode: str = INTERVAL_MODE
) -> Fraction:
    """Crossing triples over the smaller internal volume of the two sides.

    In ``interval`` mode only triples inside ``iv`` are counted; ``full``
    counts the whole timeline.
    """
    if mode not in (INTERVAL_MODE, FULL_MODE):
        raise ValueError(f"unknown conductance mode {mode!r}")
    cut, inside, outside = _partition_counts(g, vertices, iv if mode == INTERVAL_MODE else None)
    vol = min(inside, outside)
    if vol == 0:
        raise UndefinedMetricError("one side of the cut has no internal temporal edges")
    return Fraction(cut, vol)


def compute_metrics(
    vertices: Collection[int], iv: Interval, g: TemporalGraph, u: int, tc_mode: str = INTERVAL_MODE
) -> CommunityMetrics:
    """All three metrics, with None standing in for any that are undefined."""

    def attempt(fn, *args):
        try:
            return fn(*args)
        except UndefinedMetricError:
            return None

    return CommunityMetrics(
        engagement=attempt(engagement_level, vertices, iv, g, u),
        temporal_density=attempt(temporal_density, vertices, iv, g),
        temporal_conductance=attempt(temporal_conductance, vertices, iv, g, tc_mode),
    )
