"""Cumulative (interval-weighted) graphs and the pruned interval enumeration.

A cumulative graph collapses every temporal edge inside an interval into a
static weighted edge whose weight is the number of timestamps at which the
pair interacts. Narrower intervals are derived from wider ones by peeling one
boundary timestamp off, which only touches the edges living at that timestamp.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Callable, Iterator, NamedTuple

from .temporal_graph import TemporalGraph


class InvalidIntervalError(ValueError):
    pass


class Interval(NamedTuple):
    ts: int
    te: int

    @property
    def width(self) -> int:
        return self.te - self.ts + 1

    def __str__(self) -> str:
        return f"[{self.ts},{self.te}]"


class CumulativeGraph:
    """Weighted static graph for one interval.

    ``weights`` maps a normalized pair ``(u, v)`` with ``u < v`` to its edge
    occurrences in the interval; only positive weights are kept. The adjacency
    view is built on first use.
    """

    __slots__ = ("interval", "weights", "_adj")

    def __init__(self, interval: Interval, weights: dict[tuple[int, int], int]):
        self.interval = interval
        self.weights = weights
        self._adj: dict[int, dict[int, int]] | None = None

    @property
    def adj(self) -> dict[int, dict[int, int]]:
        if self._adj is None:
            adj: dict[int, dict[int, int]] = {}
            for (u, v), w in self.weights.items():
                adj.setdefault(u, {})[v] = w
                adj.setdefault(v, {})[u] = w
            self._adj = adj
        return self._adj

    @property
    def vertices(self) -> set[int]:
        return set(self.adj)

    def __contains__(self, v: int) -> bool:
        return v in self.adj

    def __len__(self) -> int:
        return len(self.adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CumulativeGraph):
            return NotImplemented
        return self.interval == other.interval and self.weights == other.weights

    def __repr__(self) -> str:
        return f"CumulativeGraph({self.interval}, vertices={len(self)}, edges={len(self.weights)})"

    def neighbors(self, v: int) -> dict[int, int]:
        return self.adj.get(v, {})

    def weight(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self.weights.get((u, v), 0)

    def static_degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def temporal_degree(self, v: int) -> int:
        return sum(self.neighbors(v).values())

    def num_temporal_edges(self) -> int:
        return sum(self.weights.values())

    def copy(self) -> CumulativeGraph:
        return CumulativeGraph(self.interval, self.weights.copy())


class LocalCumulativeGraph:
    """Cumulative graph view answered vertex-by-vertex from the temporal index.

    Local search only ever touches the neighborhood it grows, so neighbor
    weights are computed on demand and cached instead of materializing the
    whole interval.
    """

    def __init__(self, g: TemporalGraph, interval: Interval):
        self.graph = g
        self.interval = interval
        self._cache: dict[int, dict[int, int]] = {}

    def neighbors(self, v: int) -> dict[int, int]:
        nb = self._cache.get(v)
        if nb is None:
            nb = self.graph.interval_weights(v, self.interval.ts, self.interval.te)
            self._cache[v] = nb
        return nb

    def __contains__(self, v: int) -> bool:
        return bool(self.neighbors(v))

    def weight(self, u: int, v: int) -> int:
        return self.neighbors(u).get(v, 0)

    def static_degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def temporal_degree(self, v: int) -> int:
        return sum(self.neighbors(v).values())

    @property
    def touched(self) -> int:
        return len(self._cache)


def build_cumulative(g: TemporalGraph, iv: Interval) -> CumulativeGraph:
    ts, te = iv
    if ts > te:
        raise InvalidIntervalError(f"invalid interval [{ts}, {te}]")
    weights: dict[tuple[int, int], int] = {}
    times = g.timestamps
    for t in times[bisect_left(times, ts):bisect_right(times, te)]:
        for pair in g.by_time[t]:
            weights[pair] = weights.get(pair, 0) + 1
    return CumulativeGraph(Interval(ts, te), weights)


def _drop_timestamps(weights: dict[tuple[int, int], int], g: TemporalGraph, lo: int, hi: int) -> None:
    times = g.timestamps
    for t in times[bisect_left(times, lo):bisect_right(times, hi)]:
        for pair in g.by_time[t]:
            w = weights[pair] - 1
            if w:
                weights[pair] = w
            else:
                del weights[pair]


def shrink_left(c: CumulativeGraph, g: TemporalGraph, new_ts: int | None = None) -> CumulativeGraph:
    """Cumulative graph of ``[new_ts, te]`` derived from ``c`` (default ``new_ts = ts + 1``).

    Every timestamp in ``[ts, new_ts)`` is peeled off. ``c`` is left untouched.
    """
    ts, te = c.interval
    if new_ts is None:
        new_ts = ts + 1
    if ts >= te or not ts < new_ts <= te:
        raise InvalidIntervalError(f"cannot shrink {c.interval} to start at {new_ts}")
    weights = c.weights.copy()
    _drop_timestamps(weights, g, ts, new_ts - 1)
    return CumulativeGraph(Interval(new_ts, te), weights)


def shrink_right(c: CumulativeGraph, g: TemporalGraph, new_te: int | None = None) -> CumulativeGraph:
    """Cumulative graph of ``[ts, new_te]`` derived from ``c`` (default ``new_te = te - 1``)."""
    ts, te = c.interval
    if new_te is None:
        new_te = te - 1
    if ts >= te or not ts <= new_te < te:
        raise InvalidIntervalError(f"cannot shrink {c.interval} to end at {new_te}")
    weights = c.weights.copy()
    _drop_timestamps(weights, g, new_te + 1, te)
    return CumulativeGraph(Interval(ts, new_te), weights)


def two_ends_rule(g: TemporalGraph, u: int, iv: Interval) -> bool:
    """True when ``u`` has an incident edge at both ends of ``iv``."""
    return g.has_edge_at(u, iv.ts) and g.has_edge_at(u, iv.te)


def _bfs_index_pairs(m: int) -> Iterator[list[tuple[int, int]]]:
    # shrink tree over positions in the timestamp list; one level per width
    level = [(0, m - 1)]
    while level:
        yield level
        seen: set[tuple[int, int]] = set()
        nxt = []
        for i, j in level:
            if i == j:
                continue
            for child in ((i + 1, j), (i, j - 1)):
                if child not in seen:
                    seen.add(child)
                    nxt.append(child)
        level = nxt


def enumerate_intervals(g: TemporalGraph, u: int) -> Iterator[Interval]:
    """Intervals in breadth-first shrink order that pass the two-ends rule for ``u``.

    The tree is rooted at the full time span; children drop the left then the
    right boundary timestamp. Intervals failing the rule are still expanded.
    """
    times = g.timestamps
    if not times or not g.vertex_times(u):
        return
    for level in _bfs_index_pairs(len(times)):
        for i, j in level:
            iv = Interval(times[i], times[j])
            if two_ends_rule(g, u, iv):
                yield iv


def iter_cumulative(
    g: TemporalGraph,
    u: int,
    *,
    shrink_l: Callable[..., CumulativeGraph] = shrink_left,
    shrink_r: Callable[..., CumulativeGraph] = shrink_right,
) -> Iterator[tuple[Interval, CumulativeGraph]]:
    """Like :func:`enumerate_intervals` but also yields each interval's cumulative graph.

    Graphs are derived incrementally from their parent in the shrink tree and
    only one BFS level is kept alive at a time.
    """
    times = g.timestamps
    if not times or not g.vertex_times(u):
        return
    m = len(times)
    level: dict[tuple[int, int], CumulativeGraph] = {
        (0, m - 1): build_cumulative(g, Interval(times[0], times[-1]))
    }
    while level:
        nxt: dict[tuple[int, int], CumulativeGraph] = {}
        for (i, j), c in level.items():
            if two_ends_rule(g, u, c.interval):
                yield c.interval, c
            if i == j:
                continue
            if (i + 1, j) not in nxt:
                nxt[(i + 1, j)] = shrink_l(c, g, times[i + 1])
            if (i, j - 1) not in nxt:
                nxt[(i, j - 1)] = shrink_r(c, g, times[j - 1])
        level = nxt
