"""Named example graphs and a seeded random graph generator."""
from __future__ import annotations

import math
import random
from functools import reduce

from .core import WeightedGraph


def fig1(n: int) -> WeightedGraph:
    """Ring ``0 -> 1 -> ... -> n-1 -> 0`` with an exit ``0 -> n`` to a losing self-loop.

    Entering the ring costs 1 and closing it pays 1 back; the exit pays 1
    once and then loses 1 per step.
    """
    if n < 2:
        raise ValueError("ring needs n >= 2")
    edges = [(0, 1, -1)]
    edges += [(i, i + 1, 0) for i in range(1, n - 1)]
    edges += [(n - 1, 0, 1), (0, n, 1), (n, n, -1)]
    return WeightedGraph(n + 1, edges)


def fig2(lengths: tuple[int, ...] = (6, 10, 15)) -> WeightedGraph:
    """Zero-weight loops of the given lengths through vertex 0, plus an exit to vertex 1.

    The edge ``0 -> 1`` pays 1 and vertex 1 loses 1 per step. Loop lengths
    must be distinct, at least 2 and jointly coprime, so every long enough
    horizon is a sum of loop lengths.
    """
    lengths = tuple(lengths)
    if len(lengths) != 3 or len(set(lengths)) != 3 or min(lengths) < 2:
        raise ValueError(f"need three distinct loop lengths >= 2, got {lengths}")
    if reduce(math.gcd, lengths) != 1:
        raise ValueError(f"loop lengths {lengths} share a common factor")
    edges = [(0, 1, 1), (1, 1, -1)]
    nxt = 2
    for length in lengths:
        chain = [0] + list(range(nxt, nxt + length - 1)) + [0]
        nxt += length - 1
        edges += [(s, t, 0) for s, t in zip(chain, chain[1:])]
    return WeightedGraph(nxt, edges)


def random_graph(vertices: int, max_weight: int, density: float, seed: int) -> WeightedGraph:
    """Each ordered pair (self-loops included) is an edge with probability ``density``.

    Weights are uniform integers in ``[-max_weight, max_weight]``. A vertex
    left without out-edges gets one to a uniformly chosen target.
    """
    if vertices < 1 or max_weight < 0 or not 0 <= density <= 1:
        raise ValueError("need vertices >= 1, max_weight >= 0 and density in [0, 1]")
    rng = random.Random(seed)
    edges = []
    for s in range(vertices):
        targets = [t for t in range(vertices) if rng.random() < density]
        if not targets:
            targets = [rng.randrange(vertices)]
        edges += [(s, t, rng.randint(-max_weight, max_weight)) for t in targets]
    return WeightedGraph(vertices, edges)
