"""k-core computation and greedy peeling around a query vertex.

Graphs here are plain weighted adjacency mappings ``{v: {nbr: weight}}``.
Core membership always counts distinct neighbors, never weights.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Collection, Mapping

Adjacency = Mapping[int, Mapping[int, int]]

REVALIDATE = "revalidate"
HALT = "halt"
GUARDS = (REVALIDATE, HALT)


class ContractViolation(RuntimeError):
    pass


def k_core(adj: Adjacency, k: int, within: Collection[int] | None = None) -> set[int]:
    """Vertex set of the maximal subgraph with static degree >= ``k``.

    With ``within`` the core is taken on the subgraph induced by those vertices.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    alive = set(adj) if within is None else {v for v in within if v in adj}
    deg = {v: sum(1 for x in adj[v] if x in alive) for v in alive}
    stack = [v for v, d in deg.items() if d < k]
    removed = set(stack)
    while stack:
        v = stack.pop()
        for x in adj[v]:
            if x in alive and x not in removed:
                deg[x] -= 1
                if deg[x] < k:
                    removed.add(x)
                    stack.append(x)
    return alive - removed


def component(adj: Adjacency, u: int, alive: Collection[int]) -> set[int]:
    seen = {u}
    queue = deque([u])
    while queue:
        v = queue.popleft()
        for x in adj[v]:
            if x in alive and x not in seen:
                seen.add(x)
                queue.append(x)
    return seen


@dataclass
class CoreSubgraph:
    """Mutable alive-set over a parent adjacency, with live degree counters."""

    adj: Adjacency
    query: int
    k: int
    alive: set[int]
    static_deg: dict[int, int] = field(default_factory=dict)
    temporal_deg: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_vertices(cls, adj: Adjacency, query: int, k: int, vertices: Collection[int]) -> CoreSubgraph:
        alive = set(vertices)
        sd, td = {}, {}
        for v in alive:
            s = t = 0
            for x, w in adj[v].items():
                if x in alive:
                    s += 1
                    t += w
            sd[v], td[v] = s, t
        return cls(adj, query, k, alive, sd, td)

    def remove_vertex(self, v: int) -> None:
        """Kill ``v`` and update neighbor counters. Does not cascade."""
        if v == self.query:
            raise ContractViolation("the query vertex cannot be removed")
        if v not in self.alive:
            raise ContractViolation(f"vertex {v} is not alive")
        self.alive.remove(v)
        for x, w in self.adj[v].items():
            if x in self.alive:
                self.static_deg[x] -= 1
                self.temporal_deg[x] -= w
        del self.static_deg[v], self.temporal_deg[v]

    def is_k_core(self) -> bool:
        return all(self.static_deg[v] >= self.k for v in self.alive)

    def engagement_terms(self) -> tuple[int, int]:
        """``(query temporal degree, total temporal degree)`` over the alive set."""
        return self.temporal_deg[self.query], sum(self.temporal_deg[v] for v in self.alive)


def restrict_to_query_core(
    adj: Adjacency, u: int, k: int, within: Collection[int] | None = None
) -> CoreSubgraph | None:
    """Connected k-core component containing ``u``, or None if ``u`` is not in the k-core."""
    core = k_core(adj, k, within)
    if u not in core:
        return None
    return CoreSubgraph.from_vertices(adj, u, k, component(adj, u, core))


@dataclass(frozen=True)
class PeelResult:
    """Best state reached while peeling one graph."""

    vertices: frozenset[int]
    query_degree: int
    total_degree: int
    states: int

    @property
    def engagement_key(self) -> tuple[int, int]:
        return self.query_degree, self.total_degree


def better(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Exact ``a[0]/a[1] > b[0]/b[1]`` for non-negative terms with positive denominators."""
    return a[0] * b[1] > b[0] * a[1]


def peel(adj: Adjacency, u: int, k: int, guard: str = REVALIDATE,
         within: Collection[int] | None = None) -> PeelResult | None:
    """Greedy peel of the connected k-core containing ``u``.

    Repeatedly deletes the non-query vertex with maximum temporal degree
    (smallest id on ties) and returns the intermediate state where ``u`` has
    the highest engagement; the earliest such state wins ties.
    """
    if guard == HALT:
        return _peel_halt(adj, u, k, within)
    if guard != REVALIDATE:
        raise ValueError(f"unknown guard {guard!r}")
    start = restrict_to_query_core(adj, u, k, within)
    if start is None:
        return None
    return _peel_fast(start)


def _peel_fast(s: CoreSubgraph) -> PeelResult:
    # Vertices cut off from u's component never influence it, so peeling the
    # whole alive set without component restriction visits the same sequence of
    # u-component states (with repeats). The component of u at each step is then
    # recovered offline by re-inserting the removed vertices in reverse order.
    adj, u, k = s.adj, s.query, s.k
    alive = set(s.alive)
    sd = dict(s.static_deg)
    td = dict(s.temporal_deg)
    heap = [(-td[v], v) for v in alive if v != u]
    heapq.heapify(heap)
    batches: list[list[int]] = []

    while heap:
        negd, v = heapq.heappop(heap)
        if v not in alive or -negd != td[v]:
            continue
        batch = [v]
        alive.discard(v)
        stack = [v]
        dead_query = False
        while stack:
            x = stack.pop()
            for y, w in adj[x].items():
                if y in alive:
                    sd[y] -= 1
                    td[y] -= w
                    if sd[y] < k:
                        alive.discard(y)
                        batch.append(y)
                        stack.append(y)
                        if y == u:
                            dead_query = True
                    elif y != u:
                        heapq.heappush(heap, (-td[y], y))
        if dead_query:
            alive.update(batch)
            break
        batches.append(batch)

    # reverse replay with union-find carrying internal weight per component
    parent: dict[int, int] = {}
    inner: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    du = 0

    def insert(x: int) -> None:
        nonlocal du
        parent[x] = x
        inner[x] = 0
        for y, w in adj[x].items():
            if y in parent:
                if x == u or y == u:
                    du += w
                rx, ry = find(x), find(y)
                if rx == ry:
                    inner[rx] += w
                else:
                    parent[ry] = rx
                    inner[rx] += inner.pop(ry) + w

    for x in alive:
        insert(x)
    best_step = len(batches)
    best = (du, 2 * inner[find(u)])
    for step in range(len(batches) - 1, -1, -1):
        for x in batches[step]:
            insert(x)
        cand = (du, 2 * inner[find(u)])
        if not better(best, cand):
            best, best_step = cand, step

    members = set(alive)
    for batch in batches[best_step:]:
        members.update(batch)
    vertices = component(adj, u, members)
    return PeelResult(frozenset(vertices), best[0], best[1], len(batches) + 1)


def _peel_halt(adj: Adjacency, u: int, k: int, within: Collection[int] | None) -> PeelResult | None:
    # stops at the first deletion that leaves a non-k-core around u
    s = restrict_to_query_core(adj, u, k, within)
    if s is None:
        return None
    best_vertices = frozenset(s.alive)
    best = s.engagement_terms()
    states = 1
    while len(s.alive) > 1:
        v = max((x for x in s.alive if x != u), key=lambda x: (s.temporal_deg[x], -x))
        s.remove_vertex(v)
        comp = component(adj, u, s.alive)
        for x in s.alive - comp:
            s.remove_vertex(x)
        if not s.is_k_core():
            break
        states += 1
        terms = s.engagement_terms()
        if better(terms, best):
            best, best_vertices = terms, frozenset(s.alive)
    return PeelResult(best_vertices, best[0], best[1], states)


def peel_reference(adj: Adjacency, u: int, k: int, within: Collection[int] | None = None) -> PeelResult | None:
    """Literal revalidating peel: delete, recompute the query core, repeat.

    Quadratic; kept as the cross-check for :func:`peel`.
    """
    s = restrict_to_query_core(adj, u, k, within)
    if s is None:
        return None
    best_vertices = frozenset(s.alive)
    best = s.engagement_terms()
    states = 1
    while True:
        v = max((x for x in s.alive if x != u), key=lambda x: (s.temporal_deg[x], -x))
        remaining = s.alive - {v}
        nxt = restrict_to_query_core(adj, u, k, remaining)
        if nxt is None:
            break
        s = nxt
        states += 1
        terms = s.engagement_terms()
        if better(terms, best):
            best, best_vertices = terms, frozenset(s.alive)
    return PeelResult(best_vertices, best[0], best[1], states)
