"""Command-line entry point.

Exit codes: 0 success, 1 usage or data error, 2 query feasible but no
community found, 3 a consistency check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from .core_engine import GUARDS, REVALIDATE
from .metrics import FULL_MODE, INTERVAL_MODE, compute_metrics
from .oracle import OracleLimitError, check_incremental_equivalence, exact_secs
from .search import HEURISTICS, Algorithm, QuerySpec, run_query
from .temporal_graph import EmptyGraphError, GraphFormatError, TemporalGraph, load_edge_list, write_edge_list
from .workload import (
    RECORD_COLUMNS,
    SUMMARY_COLUMNS,
    BenchmarkPlan,
    default_threads,
    format_table,
    graph_stats,
    prepare_graph,
    run_benchmark,
    synthetic_graph,
    write_records,
)

EXIT_OK, EXIT_ERROR, EXIT_EMPTY, EXIT_CHECK_FAILED = 0, 1, 2, 3

ALGO_CHOICES = [a.value for a in Algorithm]


def _num(x):
    return None if x is None else round(float(x), 6)


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, metavar="PATH", help="edge list with 'u v t' lines")
    p.add_argument("--time-scale", type=int, default=1, metavar="N", help="raw time units per bucket (default 1)")
    p.add_argument("--origin", type=int, default=None, metavar="N",
                   help="raw timestamp of bucket 0 (default: smallest timestamp in the file)")
    p.add_argument("--format", choices=("table", "jsonl"), default="table")


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--guard", choices=GUARDS, default=REVALIDATE,
                   help="peeling loop guard: re-run the query core after each deletion, or stop at the first violation")
    p.add_argument("--tc-mode", choices=(INTERVAL_MODE, FULL_MODE), default=INTERVAL_MODE,
                   help="count conductance triples inside the community interval or over the whole timeline")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secs",
        description="Significant engagement community search on temporal graphs.",
        epilog="exit codes: 0 ok, 1 usage/data error, 2 no community, 3 check failed",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="search the community of one query vertex")
    _add_input(q)
    q.add_argument("--query", type=int, required=True, metavar="ID", help="query vertex (original id)")
    q.add_argument("--k", type=int, default=2, metavar="N")
    q.add_argument("--algo", choices=ALGO_CHOICES, default=Algorithm.BULS_STAR.value)
    _add_search_flags(q)

    b = sub.add_parser("bench", help="run sampled queries for several algorithms")
    _add_input(b)
    b.add_argument("--k", type=int, nargs="+", default=[2], metavar="N")
    b.add_argument("--algo", choices=ALGO_CHOICES, nargs="+", default=[a.value for a in HEURISTICS])
    b.add_argument("--queries", type=int, default=100, metavar="N")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--vts", type=int, default=None, metavar="N", help="coarsen timestamps by this factor")
    b.add_argument("--vns", type=float, default=None, metavar="F", help="keep this fraction of vertices")
    b.add_argument("--threads", type=int, default=default_threads(), metavar="N")
    b.add_argument("--no-query-filter", action="store_true",
                   help="sample queries from all vertices, not just those with degree >= k")
    b.add_argument("--oracle", action="store_true", help="compare each result with the exact optimum (small graphs)")
    b.add_argument("--records", metavar="PATH", help="also write per-query records as JSON lines")
    b.add_argument("--details", action="store_true", help="print per-query rows in table format")
    _add_search_flags(b)

    o = sub.add_parser("oracle-check", help="incremental-update and exact-optimum consistency checks")
    _add_input(o)
    o.add_argument("--trials", type=int, default=100)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--k", type=int, default=2, metavar="N")
    o.add_argument("--query", type=int, default=None, metavar="ID",
                   help="query for the exact comparison (default: every vertex)")
    o.add_argument("--guard", choices=GUARDS, default=REVALIDATE)

    s = sub.add_parser("stats", help="dataset statistics")
    _add_input(s)
    s.add_argument("--vts", type=int, default=None, metavar="N")
    s.add_argument("--vns", type=float, default=None, metavar="F")
    s.add_argument("--seed", type=int, default=0)

    gen = sub.add_parser("generate", help="write a synthetic community-structured temporal graph")
    gen.add_argument("--n", type=int, default=5000)
    gen.add_argument("--m", type=int, default=50000, help="number of distinct temporal edges")
    gen.add_argument("--timestamps", type=int, default=30)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", required=True, metavar="PATH")
    return parser


def _load(args) -> TemporalGraph:
    return load_edge_list(args.input, time_scale=args.time_scale, unit_origin=args.origin)


def _emit(rows, columns, fmt: str) -> None:
    if fmt == "jsonl":
        for r in rows:
            print(json.dumps({c: r[c] for c in columns}, sort_keys=True))
    else:
        print(format_table(rows, columns))


def cmd_query(args) -> int:
    g = _load(args)
    try:
        u = g.vertex_of(args.query)
    except KeyError:
        print(f"error: vertex {args.query} is not in the graph", file=sys.stderr)
        return EXIT_ERROR
    res = run_query(g, QuerySpec(u, args.k, Algorithm(args.algo)), args.guard)
    record = {
        "algorithm": args.algo,
        "query": args.query,
        "k": args.k,
        "found": res.found,
        "vertices": sorted(g.labels[v] for v in res.vertices),
        "interval": list(res.interval) if res.interval else None,
        "raw_interval": list(g.raw_range(*res.interval)) if res.interval else None,
        "el": None, "el_exact": None, "td": None, "tc": None,
        "elapsed_us": int(res.elapsed * 1e6),
    }
    if res.found:
        m = compute_metrics(res.vertices, res.interval, g, u, args.tc_mode)
        record.update(el=_num(m.engagement), el_exact=str(m.engagement), td=_num(m.temporal_density),
                      tc=_num(m.temporal_conductance))
    if args.format == "jsonl":
        print(json.dumps(record, sort_keys=True))
    else:
        for key, val in record.items():
            print(f"{key:<13}{val}")
    if not res.found:
        print("no community", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_bench(args) -> int:
    g = _load(args)
    plan = BenchmarkPlan(
        query_count=args.queries,
        ks=args.k,
        algorithms=args.algo,
        seed=args.seed,
        vts=args.vts,
        vns=args.vns,
        query_filter=not args.no_query_filter,
        tc_mode=args.tc_mode,
        guard=args.guard,
        oracle=args.oracle,
        threads=args.threads,
    )
    report = run_benchmark(g, plan)
    if args.records:
        write_records(report, args.records)
    record_cols = RECORD_COLUMNS + (("oracle_optimum", "dominated") if args.oracle else ())
    if args.format == "jsonl":
        for r in report.records:
            print(r.to_json())
        for s in report.summary:
            print(json.dumps({"summary": True, **s.__dict__}, sort_keys=True))
    else:
        print(format_table([report.graph_stats], list(report.graph_stats)))
        print()
        if args.details:
            print(format_table(report.records, record_cols))
            print()
        print(format_table(report.summary, SUMMARY_COLUMNS))
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    g = _load(args)
    failed = False
    rep = check_incremental_equivalence(g, trials=args.trials, seed=args.seed)
    print(rep)
    failed |= not rep.passed
    queries = [g.vertex_of(args.query)] if args.query is not None else range(g.n)
    rows = []
    try:
        for u in queries:
            opt = exact_secs(g, QuerySpec(u, args.k, Algorithm.EXACT))
            row = {"query": g.labels[u], "optimum": _num(opt.optimum_engagement),
                   "pruned_optimum": _num(opt.pruned_optimum)}
            for algo in HEURISTICS:
                got = run_query(g, QuerySpec(u, args.k, algo), args.guard).engagement
                row[algo.value] = _num(got)
                if got > opt.optimum_engagement:
                    failed = True
            rows.append(row)
    except OracleLimitError as exc:
        print(f"exact comparison skipped: {exc}")
    if rows:
        _emit(rows, list(rows[0]), args.format)
    print("FAILED" if failed else "all checks passed")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_stats(args) -> int:
    g = _load(args)
    if args.vts or args.vns:
        g = prepare_graph(g, BenchmarkPlan(vts=args.vts, vns=args.vns, seed=args.seed))
    stats = graph_stats(g)
    _emit([stats], list(stats), args.format)
    return EXIT_OK


def cmd_generate(args) -> int:
    started = time.perf_counter()
    g = synthetic_graph(args.n, args.m, args.timestamps, seed=args.seed)
    write_edge_list(g, args.output)
    print(f"wrote {g.num_temporal_edges} temporal edges over {g.n} vertices "
          f"to {args.output} in {time.perf_counter() - started:.1f}s")
    return EXIT_OK


COMMANDS = {
    "query": cmd_query,
    "bench": cmd_bench,
    "oracle-check": cmd_oracle_check,
    "stats": cmd_stats,
    "generate": cmd_generate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (GraphFormatError, EmptyGraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
