"""Shared hypothesis strategies and brute-force helpers for the test suite."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from exphorizon.core import FinitePath, Lasso, WeightedGraph


@st.composite
def graphs(draw, max_vertices=5, max_weight=5, min_vertices=1):
    n = draw(st.integers(min_vertices, max_vertices))
    edges = []
    for s in range(n):
        targets = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n))
        for t in sorted(targets):
            edges.append((s, t, draw(st.integers(-max_weight, max_weight))))
    return WeightedGraph(n, edges)


horizons = st.sampled_from([Fraction(3, 2), Fraction(4), Fraction(17, 3)])


def random_walk(graph: WeightedGraph, start: int, length: int, rng: random.Random) -> FinitePath:
    vs = [start]
    for _ in range(length):
        vs.append(rng.choice(graph.successors(vs[-1])))
    return FinitePath(tuple(vs))


def random_lasso(graph: WeightedGraph, rng: random.Random, walk_length: int = 20, simple_ok: bool = True) -> Lasso:
    """Cut a random walk at two visits of the same vertex."""
    while True:
        walk = random_walk(graph, 0, walk_length, rng).vertices
        pairs = [(i, j) for i in range(len(walk)) for j in range(i + 1, len(walk)) if walk[i] == walk[j]]
        if not pairs:
            continue
        i, j = rng.choice(pairs)
        lasso = Lasso(FinitePath(walk[: i + 1]), FinitePath(walk[i: j + 1]))
        if simple_ok or not lasso.is_simple():
            return lasso


def all_paths(graph: WeightedGraph, start: int, length: int):
    """Every path with exactly ``length`` edges from ``start``."""
    paths = [(start,)]
    for _ in range(length):
        paths = [p + (s,) for p in paths for s in graph.successors(p[-1])]
    return [FinitePath(p) for p in paths]


def rationals_with_small_denominator(lo: Fraction, hi: Fraction, qmax: int):
    out = set()
    for q in range(1, qmax + 1):
        for p in range(int(lo * q) - 1, int(hi * q) + 2):
            x = Fraction(p, q)
            if lo <= x <= hi:
                out.add(x)
    return sorted(out)

