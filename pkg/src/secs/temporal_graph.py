"""Temporal graph model, edge-list ingestion and de-temporal projection."""

from __future__ import annotations

import os
from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Raised for a malformed line in an edge-list file."""

    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")
        self.lineno = lineno


class EmptyGraphError(ValueError):
    """Raised when ingestion leaves no temporal edges."""


class TemporalGraph:
    """Undirected temporal graph over dense vertex ids ``0..n-1``.

    Each temporal edge is a triple ``(u, v, t)`` with ``u < v``; a triple is
    stored at most once. Instances are treated as immutable once built.

    Attributes:
        n: number of vertices.
        edges: triples sorted by ``(t, u, v)``.
        timestamps: sorted distinct timestamps carrying at least one edge.
        labels: original vertex id for each dense id.
        time_scale, origin: bucketing parameters used at ingestion, kept so
            bucketed intervals can be mapped back to raw time.
    """

    def __init__(
        self,
        n: int,
        triples: Iterable[tuple[int, int, int]],
        labels: Sequence[int] | None = None,
        time_scale: int = 1,
        origin: int = 0,
    ):
        canon = set()
        for u, v, t in triples:
            if u == v:
                continue
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex out of range in triple {(u, v, t)}")
            if u > v:
                u, v = v, u
            canon.add((u, v, t))

        self.n = n
        self.labels = list(labels) if labels is not None else list(range(n))
        if len(self.labels) != n:
            raise ValueError("labels must have one entry per vertex")
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.time_scale = time_scale
        self.origin = origin
        self.edges: list[tuple[int, int, int]] = sorted(canon, key=lambda e: (e[2], e[0], e[1]))

        by_time: dict[int, list[tuple[int, int]]] = defaultdict(list)
        nbr_times: list[dict[int, list[int]]] = [defaultdict(list) for _ in range(n)]
        for u, v, t in self.edges:
            by_time[t].append((u, v))
            nbr_times[u][v].append(t)
            nbr_times[v][u].append(t)
        self.by_time: dict[int, list[tuple[int, int]]] = dict(by_time)
        self.timestamps: list[int] = sorted(by_time)
        # edges are visited in time order, so each per-neighbor list is already sorted
        self._nbr_times: list[dict[int, list[int]]] = [dict(d) for d in nbr_times]
        self._vertex_times: list[list[int]] = [
            sorted({t for ts in d.values() for t in ts}) for d in self._nbr_times
        ]

    def __repr__(self) -> str:
        return f"TemporalGraph(n={self.n}, temporal_edges={len(self.edges)}, timestamps={len(self.timestamps)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges and self.labels == other.labels

    @property
    def num_temporal_edges(self) -> int:
        return len(self.edges)

    @property
    def timestamp_domain(self) -> tuple[int, int]:
        if not self.timestamps:
            raise EmptyGraphError("graph has no timestamps")
        return self.timestamps[0], self.timestamps[-1]

    def neighbor_times(self, u: int) -> dict[int, list[int]]:
        """Map each neighbor of ``u`` to the sorted timestamps of their edges."""
        return self._nbr_times[u]

    def vertex_times(self, u: int) -> list[int]:
        """Sorted distinct timestamps at which ``u`` has an incident edge."""
        return self._vertex_times[u]

    def incident(self, u: int) -> list[tuple[int, int]]:
        """Sorted ``(neighbor, timestamp)`` pairs for ``u``."""
        return sorted((v, t) for v, ts in self._nbr_times[u].items() for t in ts)

    def has_edge_at(self, u: int, t: int) -> bool:
        times = self._vertex_times[u]
        i = bisect_left(times, t)
        return i < len(times) and times[i] == t

    def interval_weights(self, u: int, ts: int, te: int) -> dict[int, int]:
        """Edge occurrences between ``u`` and each neighbor within ``[ts, te]``."""
        out = {}
        for v, times in self._nbr_times[u].items():
            w = bisect_right(times, te) - bisect_left(times, ts)
            if w:
                out[v] = w
        return out

    def raw_range(self, ts: int, te: int) -> tuple[int, int]:
        """Raw time span covered by the bucket interval ``[ts, te]``."""
        return self.origin + ts * self.time_scale, self.origin + (te + 1) * self.time_scale - 1

    def label_of(self, v: int) -> int:
        return self.labels[v]

    def vertex_of(self, label: int) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"unknown vertex id {label}") from None


@dataclass(frozen=True)
class DetemporalGraph:
    n: int
    edges: frozenset[tuple[int, int]]
    adj: tuple[frozenset[int], ...]

    def degree(self, u: int) -> int:
        return len(self.adj[u])


def _parse_lines(lines: Iterable[str]) -> list[tuple[int, int, int]]:
    rows = []
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        parts = s.split()
        if len(parts) != 3:
            raise GraphFormatError(lineno, line, "expected 'u v t'")
        try:
            u, v, t = (int(p) for p in parts)
        except ValueError:
            raise GraphFormatError(lineno, line, "non-integer field") from None
        rows.append((u, v, t))
    return rows


def from_raw_triples(
    rows: Iterable[tuple[int, int, int]],
    time_scale: int = 1,
    origin: int | None = None,
) -> TemporalGraph:
    """Bucket raw timestamps, drop self-loops and remap ids to ``0..n-1``.

    Dense ids follow the sorted order of the original ids. When ``origin`` is
    None the minimum raw timestamp is used.
    """
    if time_scale < 1:
        raise ValueError("time_scale must be >= 1")
    rows = [(u, v, t) for u, v, t in rows if u != v]
    if not rows:
        raise EmptyGraphError("no temporal edges after dropping self-loops")
    if origin is None:
        origin = min(t for _, _, t in rows)

    labels = sorted({x for u, v, _ in rows for x in (u, v)})
    index = {lab: i for i, lab in enumerate(labels)}
    triples = [(index[u], index[v], (t - origin) // time_scale) for u, v, t in rows]
    return TemporalGraph(len(labels), triples, labels=labels, time_scale=time_scale, origin=origin)


def load_edge_list(
    path: str | os.PathLike,
    time_scale: int = 1,
    unit_origin: int | None = None,
) -> TemporalGraph:
    """Read a whitespace-separated ``u v t`` file into a :class:`TemporalGraph`.

    Lines starting with ``#`` or ``%`` are comments. Raises
    :class:`GraphFormatError` on a malformed line and :class:`EmptyGraphError`
    when nothing survives self-loop removal.
    """
    with open(path, encoding="utf-8") as fh:
        rows = _parse_lines(fh)
    return from_raw_triples(rows, time_scale=time_scale, origin=unit_origin)


def write_edge_list(g: TemporalGraph, path: str | os.PathLike) -> None:
    """Write the canonical triple list: original ids, bucketed times, sorted by (t, u, v)."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v, t in g.edges:
            fh.write(f"{g.labels[u]} {g.labels[v]} {t}\n")


def edge_occurrences(g: TemporalGraph, u: int, v: int, ts: int, te: int) -> int:
    if ts > te:
        raise ValueError(f"invalid interval [{ts}, {te}]")
    times = g.neighbor_times(u).get(v)
    if not times:
        return 0
    return bisect_right(times, te) - bisect_left(times, ts)


def temporal_degree(g: TemporalGraph, u: int, ts: int, te: int) -> int:
    return sum(g.interval_weights(u, ts, te).values())


def detemporalize(g: TemporalGraph) -> DetemporalGraph:
    edges = frozenset((u, v) for u, v, _ in g.edges)
    adj = tuple(frozenset(g.neighbor_times(u)) for u in range(g.n))
    return DetemporalGraph(g.n, edges, adj)
