import json
import logging
import random

import pytest

from secs.search import HEURISTICS, Algorithm
from secs.temporal_graph import TemporalGraph, detemporalize
from secs.workload import (
    BenchmarkPlan,
    derive_vns,
    derive_vts,
    format_table,
    graph_stats,
    measure_query,
    run_benchmark,
    sample_queries,
    synthetic_graph,
    write_records,
)
from secs.search import QuerySpec

from .strategies import random_graph


def test_vts_identity_and_merge(fig1):
    assert derive_vts(fig1, 1) is fig1
    g = TemporalGraph(2, [(0, 1, 0), (0, 1, 1), (0, 1, 2)])
    h = derive_vts(g, 2)
    assert h.edges == [(0, 1, 0), (0, 1, 1)]
    assert h.time_scale == 2
    with pytest.raises(ValueError):
        derive_vts(g, 0)


def test_vts_recount():
    rng = random.Random(5)
    for _ in range(50):
        g = random_graph(rng, 6, 8)
        f = rng.randint(2, 4)
        expect = {(u, v, t // f) for u, v, t in g.edges}
        assert set(derive_vts(g, f).edges) == expect


def test_vns_identity(fig1):
    h = derive_vns(fig1, 1.0)
    assert h == fig1


def test_vns_induced_membership(fig1):
    h = derive_vns(fig1, 0.6, seed=3)
    assert h.n <= round(0.6 * fig1.n)
    raw = {(fig1.labels[u], fig1.labels[v], t) for u, v, t in fig1.edges}
    kept = {h.labels[v] for v in range(h.n)}
    induced = {e for e in raw if e[0] in kept and e[1] in kept}
    assert {(h.labels[u], h.labels[v], t) for u, v, t in h.edges} == induced
    assert derive_vns(fig1, 0.6, seed=3) == h
    with pytest.raises(ValueError):
        derive_vns(fig1, 0)


def test_sample_queries_is_seeded_and_filtered():
    g = synthetic_graph(300, 2000, 5, seed=1)
    a = sample_queries(g, 20, 3, seed=9)
    assert a == sample_queries(g, 20, 3, seed=9)
    dg = detemporalize(g)
    assert all(dg.degree(v) >= 3 for v in a)
    assert len(set(a)) == 20


def test_sample_queries_warns_when_short(fig1, caplog):
    with caplog.at_level(logging.WARNING):
        got = sample_queries(fig1, 50, 2)
    dg = detemporalize(fig1)
    assert got == [v for v in range(7) if dg.degree(v) >= 2]
    assert "eligible" in caplog.text
    assert len(sample_queries(fig1, 50, 2, filtered=False)) == 7


def test_synthetic_graph_shape():
    g = synthetic_graph(500, 4000, 10, seed=2)
    assert g.n <= 500
    assert abs(g.num_temporal_edges - 4000) <= 400
    assert set(g.timestamps) <= set(range(10))
    assert synthetic_graph(500, 4000, 10, seed=2) == g


def test_measure_query_record(fig1):
    rec = measure_query(fig1, QuerySpec(0, 2, Algorithm.BULS_STAR), with_oracle=True)
    assert rec.valid and rec.error is None
    assert rec.el == pytest.approx(0.4)
    assert rec.dominated is True
    assert 0 < rec.expanded_fraction <= 1


def test_single_query_benchmark(fig1):
    rep = run_benchmark(fig1, BenchmarkPlan(query_count=1, algorithms=[Algorithm.TDGP]))
    assert len(rep.records) == 1 and len(rep.summary) == 1
    assert rep.row("tdgp").queries == 1
    assert rep.graph_stats == graph_stats(fig1)


def test_oracle_dominance_column(fig1):
    rep = run_benchmark(fig1, BenchmarkPlan(query_count=7, algorithms=HEURISTICS, oracle=True))
    assert all(r.dominated for r in rep.records if r.el is not None)
    assert all(row.dominance_ok for row in rep.summary)


def test_benchmark_determinism(tmp_path):
    g = synthetic_graph(200, 1500, 6, seed=4)
    plan = BenchmarkPlan(query_count=5, ks=(2, 3), seed=8, vns=0.8)
    a, b = run_benchmark(g, plan), run_benchmark(g, plan)
    assert a.fingerprint() == b.fingerprint()
    assert len(a.records) == 2 * 5 * len(HEURISTICS)
    out = tmp_path / "records.jsonl"
    write_records(a, out)
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    assert len(lines) == len(a.records)


def test_benchmark_parallel_matches_serial():
    g = synthetic_graph(150, 1000, 5, seed=6)
    serial = run_benchmark(g, BenchmarkPlan(query_count=4, threads=1))
    pooled = run_benchmark(g, BenchmarkPlan(query_count=4, threads=2))
    assert serial.fingerprint() == pooled.fingerprint()


def test_format_table_handles_none():
    text = format_table([{"a": None, "b": 1.5}], ["a", "b"])
    assert "a" in text.splitlines()[0] and "-" in text


def test_vns_keeping_one_adjacent_pair():
    g = TemporalGraph(3, [(0, 1, 0), (0, 1, 2), (1, 2, 1), (0, 2, 3)])
    for seed in range(5):
        h = derive_vns(g, 2 / 3, seed=seed)
        assert h.n == 2
        a, b = h.labels
        expect = sorted(t for u, v, t in g.edges if {u, v} == {a, b})
        assert [t for *_, t in h.edges] == expect


def test_vns_without_edges_is_an_error():
    from secs.temporal_graph import EmptyGraphError

    g = TemporalGraph(4, [(0, 1, 0), (2, 3, 0)])
    with pytest.raises(EmptyGraphError):
        derive_vns(g, 0.25)


def test_sample_queries_empty_when_k_too_large(fig1, caplog):
    with caplog.at_level(logging.WARNING):
        assert sample_queries(fig1, 3, 50) == []
    assert "0 eligible" in caplog.text


def test_single_query_means_equal_the_row(fig1):
    rep = run_benchmark(fig1, BenchmarkPlan(query_count=1, algorithms=[Algorithm.BULS_STAR], seed=2))
    (rec,) = rep.records
    row = rep.row("buls*")
    assert row.mean_el == rec.el and row.mean_td == rec.td and row.mean_tc == rec.tc
    assert row.mean_runtime_us == rec.elapsed_us


def test_exact_in_plan_on_capped_graph(fig1):
    algos = [Algorithm.EXACT, *HEURISTICS]
    rep = run_benchmark(fig1, BenchmarkPlan(query_count=4, algorithms=algos, oracle=True))
    assert {r.algorithm for r in rep.records} == {a.value for a in algos}
    assert all(r.dominated is not False for r in rep.records)
    assert rep.row("exact").dominance_ok


def test_expanded_fraction_in_unit_interval():
    g = synthetic_graph(200, 1500, 6, seed=3)
    rep = run_benchmark(g, BenchmarkPlan(query_count=8))
    fracs = [r.expanded_fraction for r in rep.records if r.expanded_fraction is not None]
    assert fracs and all(0 <= f <= 1 for f in fracs)
