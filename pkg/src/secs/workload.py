"""Benchmark workloads: derived graphs, query sampling, synthetic graphs and reports."""

from __future__ import annotations

import json
import logging
import os
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core_engine import REVALIDATE
from .cumulative import build_cumulative
from .metrics import INTERVAL_MODE, compute_metrics
from .search import HEURISTICS, LOCAL_ALGORITHMS, Algorithm, QuerySpec, run_query, validate_community
from .temporal_graph import EmptyGraphError, TemporalGraph, detemporalize

log = logging.getLogger(__name__)


def derive_vts(g: TemporalGraph, factor: int) -> TemporalGraph:
    """Coarser time scale: every timestamp ``t`` becomes ``t // factor``."""
    if factor < 1:
        raise ValueError("factor must be >= 1")
    if factor == 1:
        return g
    return TemporalGraph(
        g.n,
        ((u, v, t // factor) for u, v, t in g.edges),
        labels=g.labels,
        time_scale=g.time_scale * factor,
        origin=g.origin,
    )


def derive_vns(g: TemporalGraph, fraction: float, seed: int = 0) -> TemporalGraph:
    """Temporal subgraph induced by a uniform sample of ``round(fraction * n)`` vertices.

    Sampled vertices left without edges are dropped and the rest are
    renumbered densely, keeping their original labels.
    """
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1]")
    size = round(fraction * g.n)
    keep = set(random.Random(seed).sample(range(g.n), size))
    triples = [(u, v, t) for u, v, t in g.edges if u in keep and v in keep]
    if not triples:
        raise EmptyGraphError("vertex sample induces no temporal edges")
    used = sorted({x for u, v, _ in triples for x in (u, v)})
    index = {v: i for i, v in enumerate(used)}
    return TemporalGraph(
        len(used),
        ((index[u], index[v], t) for u, v, t in triples),
        labels=[g.labels[v] for v in used],
        time_scale=g.time_scale,
        origin=g.origin,
    )


def sample_queries(g: TemporalGraph, count: int, k: int, seed: int = 0, filtered: bool = True) -> list[int]:
    """Seeded uniform sample of query vertices, by default only those with static degree >= ``k``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if filtered:
        dg = detemporalize(g)
        eligible = [v for v in range(g.n) if dg.degree(v) >= k]
    else:
        eligible = list(range(g.n))
    if len(eligible) < count:
        log.warning("only %d eligible query vertices for k=%d (asked for %d)", len(eligible), k, count)
        return eligible
    return random.Random(seed).sample(eligible, count)


def synthetic_graph(
    n: int,
    m: int,
    timestamps: int,
    seed: int = 0,
    community_size: int = 25,
    p_intra: float = 0.8,
    mean_burst: float = 2.5,
) -> TemporalGraph:
    """Community-structured temporal graph with ``m`` distinct triples.

    Pairs are drawn mostly inside planted communities, and each drawn pair
    interacts in a short burst of consecutive timestamps.
    """
    if n < 2 or timestamps < 1:
        raise ValueError("need n >= 2 and at least one timestamp")
    capacity = n * (n - 1) // 2 * timestamps
    if m > capacity:
        raise ValueError(f"cannot place {m} distinct triples in {capacity} slots")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    groups = [order[i:i + community_size] for i in range(0, n, community_size)]
    groups = [grp for grp in groups if len(grp) >= 2]
    triples: set[tuple[int, int, int]] = set()
    while len(triples) < m:
        if groups and rng.random() < p_intra:
            u, v = rng.sample(rng.choice(groups), 2)
        else:
            u, v = rng.sample(range(n), 2)
        if u > v:
            u, v = v, u
        start = rng.randrange(timestamps)
        burst = 1
        while rng.random() > 1 / mean_burst:
            burst += 1
        for t in range(start, min(start + burst, timestamps)):
            triples.add((u, v, t))
            if len(triples) >= m:
                break
    used = sorted({x for u, v, _ in triples for x in (u, v)})
    index = {v: i for i, v in enumerate(used)}
    return TemporalGraph(len(used), ((index[u], index[v], t) for u, v, t in triples), labels=used)


@dataclass
class BenchmarkPlan:
    query_count: int = 100
    ks: Sequence[int] = (2,)
    algorithms: Sequence[Algorithm] = HEURISTICS
    seed: int = 0
    vts: int | None = None
    vns: float | None = None
    query_filter: bool = True
    tc_mode: str = INTERVAL_MODE
    guard: str = REVALIDATE
    oracle: bool = False
    threads: int = 1

    def __post_init__(self):
        self.algorithms = tuple(Algorithm(a) for a in self.algorithms)
        if self.query_count < 1:
            raise ValueError("query_count must be >= 1")


@dataclass
class QueryRecord:
    algorithm: str
    query: int
    k: int
    interval: tuple[int, int] | None
    vertex_count: int
    el: float | None
    td: float | None
    tc: float | None
    elapsed_us: int
    expanded_fraction: float | None = None
    oracle_optimum: float | None = None
    dominated: bool | None = None
    valid: bool = True
    error: str | None = None

    def to_json(self, with_timing: bool = True) -> str:
        d = asdict(self)
        if not with_timing:
            d.pop("elapsed_us")
        return json.dumps(d, sort_keys=True)


@dataclass
class SummaryRow:
    algorithm: str
    k: int
    queries: int
    found: int
    mean_runtime_us: float
    mean_el: float | None
    mean_td: float | None
    mean_tc: float | None
    mean_expanded_fraction: float | None
    excluded_el: int
    excluded_td: int
    excluded_tc: int
    dominance_ok: bool | None = None


@dataclass
class BenchmarkReport:
    records: list[QueryRecord] = field(default_factory=list)
    summary: list[SummaryRow] = field(default_factory=list)
    graph_stats: dict = field(default_factory=dict)

    def row(self, algorithm: Algorithm | str, k: int = 2) -> SummaryRow:
        name = Algorithm(algorithm).value
        for r in self.summary:
            if r.algorithm == name and r.k == k:
                return r
        raise KeyError((name, k))

    def fingerprint(self) -> list[str]:
        """Records without timing fields; equal across reruns with the same seed."""
        return [r.to_json(with_timing=False) for r in self.records]


def _num(x: Fraction | None) -> float | None:
    return None if x is None else round(float(x), 6)


def graph_stats(g: TemporalGraph) -> dict:
    return {
        "n": g.n,
        "temporal_edges": g.num_temporal_edges,
        "static_edges": len(detemporalize(g).edges),
        "timestamps": len(g.timestamps),
    }


_WORKER_GRAPH: TemporalGraph | None = None


def _init_worker(g: TemporalGraph) -> None:
    global _WORKER_GRAPH
    _WORKER_GRAPH = g


def _run_one(task: tuple[int, int, Algorithm, str, str, bool]) -> QueryRecord:
    u, k, algo, guard, tc_mode, with_oracle = task
    return measure_query(_WORKER_GRAPH, QuerySpec(u, k, algo), guard, tc_mode, with_oracle)


def measure_query(
    g: TemporalGraph, q: QuerySpec, guard: str = REVALIDATE, tc_mode: str = INTERVAL_MODE, with_oracle: bool = False
) -> QueryRecord:
    """Run one query and turn the result into a record; failures are captured, not raised."""
    label = g.labels[q.u]
    try:
        res = run_query(g, q, guard)
    except Exception as exc:  # recorded per query, never fatal for the whole run
        return QueryRecord(q.algorithm.value, label, q.k, None, 0, None, None, None, 0, valid=False,
                           error=f"{type(exc).__name__}: {exc}")
    rec = QueryRecord(
        algorithm=q.algorithm.value,
        query=label,
        k=q.k,
        interval=tuple(res.interval) if res.interval else None,
        vertex_count=len(res.vertices),
        el=None,
        td=None,
        tc=None,
        elapsed_us=int(res.elapsed * 1e6),
    )
    if res.found:
        m = compute_metrics(res.vertices, res.interval, g, q.u, tc_mode)
        rec.el, rec.td, rec.tc = _num(m.engagement), _num(m.temporal_density), _num(m.temporal_conductance)
        rec.valid = not validate_community(g, res)
    if res.first_interval is not None and res.expanded_size is not None:
        if q.algorithm in LOCAL_ALGORITHMS:
            total = len(build_cumulative(g, res.first_interval))
            rec.expanded_fraction = round(res.expanded_size / total, 6) if total else None
        elif q.algorithm is Algorithm.TDGP:
            rec.expanded_fraction = 1.0
    if with_oracle:
        from .oracle import OracleLimitError, exact_secs

        try:
            opt = exact_secs(g, QuerySpec(q.u, q.k, Algorithm.EXACT)).optimum_engagement
        except OracleLimitError:
            pass
        else:
            rec.oracle_optimum = _num(opt)
            rec.dominated = res.engagement <= opt
    return rec


def _mean(values: Iterable[float | None]) -> tuple[float | None, int]:
    vals = list(values)
    kept = [v for v in vals if v is not None]
    return (statistics.fmean(kept) if kept else None), len(vals) - len(kept)


def summarize(records: list[QueryRecord]) -> list[SummaryRow]:
    groups: dict[tuple[str, int], list[QueryRecord]] = {}
    for r in records:
        groups.setdefault((r.algorithm, r.k), []).append(r)
    rows = []
    for (algo, k), recs in groups.items():
        el, ex_el = _mean(r.el for r in recs)
        td, ex_td = _mean(r.td for r in recs)
        tc, ex_tc = _mean(r.tc for r in recs)
        frac, _ = _mean(r.expanded_fraction for r in recs)
        dom = [r.dominated for r in recs if r.dominated is not None]
        rows.append(SummaryRow(
            algorithm=algo,
            k=k,
            queries=len(recs),
            found=sum(1 for r in recs if r.vertex_count),
            mean_runtime_us=statistics.fmean(r.elapsed_us for r in recs),
            mean_el=None if el is None else round(el, 6),
            mean_td=None if td is None else round(td, 6),
            mean_tc=None if tc is None else round(tc, 6),
            mean_expanded_fraction=None if frac is None else round(frac, 6),
            excluded_el=ex_el,
            excluded_td=ex_td,
            excluded_tc=ex_tc,
            dominance_ok=all(dom) if dom else None,
        ))
    return rows


def prepare_graph(g: TemporalGraph, plan: BenchmarkPlan) -> TemporalGraph:
    if plan.vts:
        g = derive_vts(g, plan.vts)
    if plan.vns:
        g = derive_vns(g, plan.vns, plan.seed)
    return g


def run_benchmark(g: TemporalGraph, plan: BenchmarkPlan) -> BenchmarkReport:
    """Run every algorithm on every sampled query for each ``k`` in the plan."""
    g = prepare_graph(g, plan)
    tasks = []
    for k in plan.ks:
        for u in sample_queries(g, plan.query_count, k, plan.seed, plan.query_filter):
            for algo in plan.algorithms:
                tasks.append((u, k, algo, plan.guard, plan.tc_mode, plan.oracle))
    threads = max(1, plan.threads)
    if threads == 1 or len(tasks) < 2:
        _init_worker(g)
        records = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker, initargs=(g,)) as pool:
            records = list(pool.map(_run_one, tasks))
    return BenchmarkReport(records=records, summary=summarize(records), graph_stats=graph_stats(g))


def default_threads() -> int:
    return os.cpu_count() or 1


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, tuple):
        return f"[{x[0]},{x[1]}]"
    return str(x)


def format_table(rows: Sequence, columns: Sequence[str]) -> str:
    """Left-aligned text table over dataclass rows (or dicts)."""
    cells = [[_fmt(r[c] if isinstance(r, dict) else getattr(r, c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells)
    return "\n".join(lines)


RECORD_COLUMNS = ("algorithm", "query", "k", "interval", "vertex_count", "el", "td", "tc", "elapsed_us")
SUMMARY_COLUMNS = (
    "algorithm", "k", "queries", "found", "mean_runtime_us", "mean_el", "mean_td", "mean_tc",
    "mean_expanded_fraction", "excluded_el", "excluded_td", "excluded_tc", "dominance_ok",
)


def write_records(report: BenchmarkReport, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in report.records:
            fh.write(r.to_json() + "\n")
