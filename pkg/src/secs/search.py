"""Significant-engagement community search: global peeling and local search.

All four algorithms walk the same pruned interval stream. TDGP peels each
full cumulative graph; the BULS variants first grow a candidate set around
the query vertex and peel only the subgraph it induces.
"""

from __future__ import annotations

import enum
import heapq
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Protocol

from .core_engine import REVALIDATE, PeelResult, component, peel
from .cumulative import Interval, LocalCumulativeGraph, build_cumulative, enumerate_intervals, iter_cumulative
from .temporal_graph import TemporalGraph


class Algorithm(str, enum.Enum):
    TDGP = "tdgp"
    BULS = "buls"
    BULS_PLUS = "buls+"
    BULS_STAR = "buls*"
    EXACT = "exact"


class Strategy(str, enum.Enum):
    REFERENCE = "reference"
    ENGAGEMENT = "engagement"
    OCCURRENCE = "occurrence"


LOCAL_ALGORITHMS = (Algorithm.BULS, Algorithm.BULS_PLUS, Algorithm.BULS_STAR)
HEURISTICS = (Algorithm.TDGP,) + LOCAL_ALGORITHMS


class WeightedView(Protocol):
    def neighbors(self, v: int) -> dict[int, int]: ...


@dataclass(frozen=True)
class QuerySpec:
    u: int
    k: int = 2
    algorithm: Algorithm = Algorithm.TDGP

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))

    def check(self, g: TemporalGraph) -> None:
        if not 0 <= self.u < g.n:
            raise ValueError(f"query vertex {self.u} not in graph")


@dataclass
class CommunityResult:
    query: int
    k: int
    algorithm: Algorithm
    vertices: frozenset[int] = frozenset()
    interval: Interval | None = None
    engagement: Fraction = Fraction(0)
    temporal_edge_count: int = 0
    elapsed: float = 0.0
    intervals_examined: int = 0
    # first-interval candidate set size for local algorithms (|V| of the full graph for tdgp)
    expanded_size: int | None = None
    first_interval: Interval | None = None
    # running best engagement after each interval that produced a community
    best_history: list[Fraction] = field(default_factory=list, repr=False)

    @property
    def found(self) -> bool:
        return bool(self.vertices)


@dataclass
class SearchState:
    best_result: Fraction = Fraction(0)
    best_community: CommunityResult | None = None
    history: list[Fraction] = field(default_factory=list)

    def offer(self, result: CommunityResult) -> bool:
        """Keep ``result`` if it beats the current best; ties go to the smaller interval."""
        cur = self.best_community
        take = (
            cur is None
            or result.engagement > cur.engagement
            or (result.engagement == cur.engagement and result.interval < cur.interval)
        )
        if take:
            self.best_community = result
            self.best_result = max(self.best_result, result.engagement)
        self.history.append(self.best_result)
        return take


def naive_candidates(c: WeightedView, u: int, k: int) -> set[int]:
    """BFS from ``u`` through neighbors whose static degree is at least ``k``."""
    seen = {u}
    queue = deque([u])
    while queue:
        s = queue.popleft()
        for v in sorted(c.neighbors(s)):
            if v not in seen and len(c.neighbors(v)) >= k:
                seen.add(v)
                queue.append(v)
    return seen


class _Candidates:
    """Live alternative subgraph with incremental engagement terms."""

    def __init__(self, c: WeightedView, u: int, k: int, members):
        self.c = c
        self.u = u
        self.k = k
        self.deficient = 0  # members with fewer than k neighbors inside the set
        self.members: set[int] = set()
        self.query_degree = 0
        self.total_degree = 0
        self.inner_deg: dict[int, int] = {}
        self.links_in: dict[int, int] = {}  # outside vertex -> neighbors inside the set
        self.on_link = None
        for v in members:
            self.add(v)

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def add(self, n: int) -> None:
        self.members.add(n)
        self.links_in.pop(n, None)
        links = 0
        for y, w in self.c.neighbors(n).items():
            if y not in self.members:
                self.links_in[y] = self.links_in.get(y, 0) + 1
                if self.on_link is not None:
                    self.on_link(y)
            else:
                self.total_degree += 2 * w
                if y == self.u or n == self.u:
                    self.query_degree += w
                self.inner_deg[y] += 1
                if self.inner_deg[y] == self.k:
                    self.deficient -= 1
                links += 1
        self.inner_deg[n] = links
        if links < self.k:
            self.deficient += 1


def strategy_reference(cand: _Candidates, n: int, m: int, k: int, best: Fraction) -> bool:
    c = cand.c
    if n in cand or len(c.neighbors(n)) < k:
        return False
    denom = cand.total_degree + c.neighbors(m)[n]
    return cand.query_degree * best.denominator > best.numerator * denom


def strategy_engagement(
    cand: _Candidates, n: int, m: int, k: int, frozen: tuple[int, int], root_weight: int, ac_m: int
) -> bool:
    c = cand.c
    if n in cand or len(c.neighbors(n)) < k:
        return False
    du, total = frozen
    # (du + w(u,x)) / (total + w(m,n) + ac(m)) > du / total, cross-multiplied
    return (du + root_weight) * total > du * (total + c.neighbors(m)[n] + ac_m)


def strategy_occurrence(cand: _Candidates, frontier: list[tuple[int, int]], k: int) -> int | None:
    """Pop the least-weight frontier vertex (smallest id on ties) that already has ``k`` links into the set."""
    while frontier:
        _, n = heapq.heappop(frontier)
        if n not in cand and cand.links_in.get(n, 0) >= k:
            return n
    return None


def advanced_candidates(
    c: WeightedView, u: int, k: int, strategy: Strategy, state: SearchState | None = None
) -> set[int]:
    """Candidate set seeded by the qualifying neighbors of ``u`` and grown per ``strategy``."""
    strategy = Strategy(strategy)
    nbrs = c.neighbors(u)
    seeds = [x for x in sorted(nbrs) if len(c.neighbors(x)) >= k]
    local = set(seeds) | {u}
    roots = [s for s in seeds if sum(1 for y in c.neighbors(s) if y in local) < k]

    cand = _Candidates(c, u, k, [u] + seeds)
    best = state.best_result if state is not None else Fraction(0)
    frozen = (cand.query_degree, cand.total_degree)

    for x in roots:
        if strategy is Strategy.OCCURRENCE:
            if not cand.deficient:
                break
            _expand_by_occurrence(cand, x, k)
            continue

        ac = {x: 0}
        queue = deque([x])
        while queue:
            m = queue.popleft()
            for n in sorted(c.neighbors(m)):
                if strategy is Strategy.REFERENCE:
                    ok = strategy_reference(cand, n, m, k, best)
                else:
                    ok = strategy_engagement(cand, n, m, k, frozen, nbrs[x], ac[m])
                if ok:
                    cand.add(n)
                    ac[n] = ac[m] + c.neighbors(m)[n]
                    queue.append(n)
    return cand.members


def _expand_by_occurrence(cand: _Candidates, x: int, k: int) -> None:
    c = cand.c
    reach: dict[int, int] = {}  # least edge weight from the expansion tree to an outside vertex
    frontier: list[tuple[int, int]] = []

    def offer(n: int) -> None:
        if n in reach and cand.links_in.get(n, 0) >= k:
            heapq.heappush(frontier, (reach[n], n))

    def grow_from(m: int) -> None:
        for n, w in c.neighbors(m).items():
            if n not in cand and w < reach.get(n, w + 1):
                reach[n] = w
                offer(n)

    cand.on_link = lambda y: offer(y) if cand.links_in[y] == k else None
    try:
        grow_from(x)
        while cand.deficient:
            n = strategy_occurrence(cand, frontier, k)
            if n is None:
                break
            cand.add(n)
            grow_from(n)
    finally:
        cand.on_link = None


def _induced(c: WeightedView, vertices: set[int]) -> dict[int, dict[int, int]]:
    return {x: {y: w for y, w in c.neighbors(x).items() if y in vertices} for x in vertices}


def _result_from_peel(q: QuerySpec, iv: Interval, res: PeelResult) -> CommunityResult:
    return CommunityResult(
        query=q.u,
        k=q.k,
        algorithm=q.algorithm,
        vertices=res.vertices,
        interval=iv,
        engagement=Fraction(res.query_degree, res.total_degree),
        temporal_edge_count=res.total_degree // 2,
    )


def _finish(state: SearchState, q: QuerySpec, started: float, examined: int,
            expanded: int | None, first: Interval | None) -> CommunityResult:
    out = state.best_community or CommunityResult(query=q.u, k=q.k, algorithm=q.algorithm)
    out.elapsed = time.perf_counter() - started
    out.intervals_examined = examined
    out.expanded_size = expanded
    out.first_interval = first
    out.best_history = list(state.history)
    return out


def tdgp(g: TemporalGraph, q: QuerySpec, guard: str = REVALIDATE) -> CommunityResult:
    """Top-down greedy peeling over every pruned interval's full cumulative graph."""
    q.check(g)
    started = time.perf_counter()
    state = SearchState()
    examined = 0
    first_size = first_iv = None
    for iv, c in iter_cumulative(g, q.u):
        examined += 1
        if first_iv is None:
            first_iv, first_size = iv, len(c)
        res = peel(c.adj, q.u, q.k, guard)
        if res is not None:
            state.offer(_result_from_peel(q, iv, res))
    return _finish(state, q, started, examined, first_size, first_iv)


_FIRST_STRATEGY = {
    Algorithm.BULS: None,
    Algorithm.BULS_PLUS: Strategy.ENGAGEMENT,
    Algorithm.BULS_STAR: Strategy.OCCURRENCE,
}


def buls_family(g: TemporalGraph, q: QuerySpec, guard: str = REVALIDATE) -> CommunityResult:
    """Bottom-up local search: BULS, BULS+ or BULS* depending on ``q.algorithm``.

    The first interval uses naive generation (BULS) or the engagement /
    occurrence expansion (BULS+ / BULS*), falling back to naive generation
    when the expansion leaves ``u`` outside every k-core. Later intervals use
    the reference strategy against the running best engagement.
    """
    if q.algorithm not in _FIRST_STRATEGY:
        raise ValueError(f"{q.algorithm} is not a local search algorithm")
    q.check(g)
    started = time.perf_counter()
    state = SearchState()
    first_strategy = _FIRST_STRATEGY[q.algorithm]
    examined = 0
    first_size = first_iv = None
    for iv in enumerate_intervals(g, q.u):
        view = LocalCumulativeGraph(g, iv)
        if first_iv is None:
            if first_strategy is None:
                cand = naive_candidates(view, q.u, q.k)
            else:
                cand = advanced_candidates(view, q.u, q.k, first_strategy, state)
            res = peel(_induced(view, cand), q.u, q.k, guard)
            if res is None and first_strategy is not None:
                cand = naive_candidates(view, q.u, q.k)
                res = peel(_induced(view, cand), q.u, q.k, guard)
            first_iv, first_size = iv, len(cand)
        else:
            cand = advanced_candidates(view, q.u, q.k, Strategy.REFERENCE, state)
            res = peel(_induced(view, cand), q.u, q.k, guard)
        examined += 1
        if res is not None:
            state.offer(_result_from_peel(q, iv, res))
    return _finish(state, q, started, examined, first_size, first_iv)


def run_query(g: TemporalGraph, q: QuerySpec, guard: str = REVALIDATE) -> CommunityResult:
    if q.algorithm is Algorithm.TDGP:
        return tdgp(g, q, guard)
    if q.algorithm is Algorithm.EXACT:
        from .oracle import exact_secs

        started = time.perf_counter()
        out = exact_secs(g, q).witness
        out.elapsed = time.perf_counter() - started
        return out
    return buls_family(g, q, guard)


def validate_community(g: TemporalGraph, result: CommunityResult) -> list[str]:
    """Structural problems with ``result``; empty when it is a valid community.

    Checks membership of the query vertex, connectivity, the k-core bound on
    the cumulative graph of the reported interval, and the stored engagement.
    """
    if not result.found:
        return []
    problems = []
    u, k = result.query, result.k
    vs = set(result.vertices)
    if u not in vs:
        problems.append("query vertex missing")
        return problems
    c = build_cumulative(g, result.interval)
    adj = {x: {y: w for y, w in c.neighbors(x).items() if y in vs} for x in vs}
    low = [x for x in vs if len(adj[x]) < k]
    if low:
        problems.append(f"vertices below degree {k}: {sorted(low)}")
    if component(adj, u, vs) != vs:
        problems.append("not connected")
    total = sum(sum(nb.values()) for nb in adj.values())
    if total == 0:
        problems.append("no temporal edges")
    elif Fraction(sum(adj[u].values()), total) != result.engagement:
        problems.append("stored engagement does not match recomputation")
    if total // 2 != result.temporal_edge_count:
        problems.append("temporal edge count mismatch")
    return problems


__all__ = [
    "Algorithm",
    "CommunityResult",
    "QuerySpec",
    "SearchState",
    "Strategy",
    "advanced_candidates",
    "buls_family",
    "naive_candidates",
    "run_query",
    "strategy_engagement",
    "strategy_occurrence",
    "strategy_reference",
    "tdgp",
    "validate_community",
]
