"""Shared hypothesis strategies and graph helpers for the test suite."""

import random
from pathlib import Path

from hypothesis import strategies as st

from secs.temporal_graph import TemporalGraph

FIXTURES = Path(__file__).parent / "fixtures"


def load_weighted(name: str) -> dict[tuple[int, int], int]:
    out = {}
    for line in (FIXTURES / name).read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        u, v, w = map(int, line.split())
        out[(min(u, v), max(u, v))] = w
    return out


def random_graph(rng: random.Random, n: int, timestamps: int, density: float = 0.35) -> TemporalGraph:
    triples = [
        (u, v, t)
        for u in range(n)
        for v in range(u + 1, n)
        for t in range(timestamps)
        if rng.random() < density
    ]
    if not triples:
        triples = [(0, 1, 0)]
    return TemporalGraph(n, triples)


@st.composite
def temporal_graphs(draw, max_n: int = 8, max_t: int = 5, min_n: int = 2):
    n = draw(st.integers(min_n, max_n))
    t = draw(st.integers(1, max_t))
    triples = draw(st.sets(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(0, t - 1)).filter(lambda e: e[0] != e[1]),
        min_size=1,
        max_size=n * (n - 1) // 2 * t,
    ))
    return TemporalGraph(n, triples)


@st.composite
def weighted_graphs(draw, max_n: int = 10):
    """Symmetric weighted adjacency dict over ``0..n-1``; isolated vertices left out."""
    n = draw(st.integers(2, max_n))
    pairs = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] < p[1])))
    adj: dict[int, dict[int, int]] = {}
    for u, v in sorted(pairs):
        w = draw(st.integers(1, 5))
        adj.setdefault(u, {})[v] = w
        adj.setdefault(v, {})[u] = w
    return adj
