"""Brute-force ground truth for small instances.

Nothing here reuses the cumulative-graph or core code under test: interval
weights are counted straight off the triple list and feasibility is checked
with bitmasks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .cumulative import CumulativeGraph, Interval, build_cumulative, shrink_left, shrink_right
from .search import Algorithm, CommunityResult, QuerySpec
from .temporal_graph import TemporalGraph

DEFAULT_MAX_VERTICES = 10
DEFAULT_MAX_TIMESTAMPS = 6


class OracleLimitError(ValueError):
    """Instance too large for exhaustive search."""


@dataclass(frozen=True)
class OracleLimits:
    max_vertices: int = DEFAULT_MAX_VERTICES
    max_timestamps: int = DEFAULT_MAX_TIMESTAMPS


@dataclass
class OracleResult:
    optimum_engagement: Fraction
    witness: CommunityResult
    candidates_examined: int
    # best engagement over intervals that pass the two-ends rule only
    pruned_optimum: Fraction = Fraction(0)

    @property
    def found(self) -> bool:
        return self.witness.found


def _interval_weights(g: TemporalGraph, ts: int, te: int) -> dict[tuple[int, int], int]:
    w: dict[tuple[int, int], int] = {}
    for u, v, t in g.edges:
        if ts <= t <= te:
            w[(u, v)] = w.get((u, v), 0) + 1
    return w


def _connected(mask: int, start: int, nbr: list[int]) -> bool:
    seen = 1 << start
    frontier = seen
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        i = low.bit_length() - 1
        new = nbr[i] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


def exact_secs(g: TemporalGraph, q: QuerySpec, limits: OracleLimits = OracleLimits()) -> OracleResult:
    """Maximum engagement over every interval and every vertex subset containing ``q.u``.

    Ties prefer the lexicographically smallest vertex set, then the smallest
    interval.
    """
    times = g.timestamps
    if g.n > limits.max_vertices or len(times) > limits.max_timestamps:
        raise OracleLimitError(
            f"instance has {g.n} vertices / {len(times)} timestamps; "
            f"limits are {limits.max_vertices} / {limits.max_timestamps}"
        )
    u, k = q.u, q.k
    u_times = {t for a, b, t in g.edges if u in (a, b)}

    best = None  # (engagement, vertex tuple, interval, temporal edge count)
    pruned_best = Fraction(0)
    examined = 0

    for i, ts in enumerate(times):
        for te in times[i:]:
            weights = _interval_weights(g, ts, te)
            present = sorted({x for pair in weights for x in pair})
            if u not in present:
                continue
            idx = {v: j for j, v in enumerate(present)}
            p = len(present)
            nbr = [0] * p
            for a, b in weights:
                nbr[idx[a]] |= 1 << idx[b]
                nbr[idx[b]] |= 1 << idx[a]
            edges = [(idx[a], idx[b], w) for (a, b), w in weights.items()]
            ui = idx[u]
            prunable = ts in u_times and te in u_times
            others = [j for j in range(p) if j != ui]
            for sub in range(1 << len(others)):
                mask = 1 << ui
                for bit, j in enumerate(others):
                    if sub >> bit & 1:
                        mask |= 1 << j
                examined += 1
                ok = True
                m = mask
                while m:
                    low = m & -m
                    m ^= low
                    if (nbr[low.bit_length() - 1] & mask).bit_count() < k:
                        ok = False
                        break
                if not ok or not _connected(mask, ui, nbr):
                    continue
                du = total = 0
                for a, b, w in edges:
                    if mask >> a & 1 and mask >> b & 1:
                        total += 2 * w
                        if a == ui or b == ui:
                            du += w
                eng = Fraction(du, total)
                if prunable and eng > pruned_best:
                    pruned_best = eng
                verts = tuple(present[j] for j in range(p) if mask >> j & 1)
                if best is None or eng > best[0] or (eng == best[0] and (verts, (ts, te)) < best[1:3]):
                    best = (eng, verts, Interval(ts, te), total // 2)

    if best is None:
        witness = CommunityResult(query=u, k=k, algorithm=Algorithm.EXACT)
        return OracleResult(Fraction(0), witness, examined, pruned_best)
    eng, verts, iv, edges_count = best
    witness = CommunityResult(
        query=u,
        k=k,
        algorithm=Algorithm.EXACT,
        vertices=frozenset(verts),
        interval=iv,
        engagement=eng,
        temporal_edge_count=edges_count,
    )
    return OracleResult(eng, witness, examined, pruned_best)


@dataclass
class EquivalenceReport:
    passed: bool
    trials: int
    counterexample: tuple[list[str], Interval] | None = None

    def __str__(self) -> str:
        if self.passed:
            return f"incremental equivalence: {self.trials} trials passed"
        path, iv = self.counterexample
        return f"incremental equivalence FAILED at {iv} via {' '.join(path)}"


def check_incremental_equivalence(
    g: TemporalGraph,
    trials: int = 100,
    seed: int = 0,
    shrink_l: Callable[[CumulativeGraph, TemporalGraph], CumulativeGraph] = shrink_left,
    shrink_r: Callable[[CumulativeGraph, TemporalGraph], CumulativeGraph] = shrink_right,
) -> EquivalenceReport:
    """Random shrink chains from the full span, each step compared with a recount from the triples."""
    rng = random.Random(seed)
    lo, hi = g.timestamp_domain
    for trial in range(trials):
        c = build_cumulative(g, Interval(lo, hi))
        path: list[str] = []
        steps = rng.randint(0, hi - lo)
        for _ in range(steps):
            if c.interval.ts >= c.interval.te:
                break
            if rng.random() < 0.5:
                c = shrink_l(c, g)
                path.append("L")
            else:
                c = shrink_r(c, g)
                path.append("R")
            if dict(c.weights) != _interval_weights(g, *c.interval):
                return EquivalenceReport(False, trial + 1, (path, c.interval))
    return EquivalenceReport(True, trials)
