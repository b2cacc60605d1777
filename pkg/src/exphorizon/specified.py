"""Optimal expected utility under a known finite-support stopping-time distribution."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import FinitePath, Lasso, UtilitySequence, WeightedGraph, as_rational, lasso_utility_at
from .fixed_horizon import NEG_INF, MaxPlusMatrix, PowerCache

DEFAULT_WITNESS_BOUND = 10**4


class DistributionError(ValueError):
    pass


@dataclass(frozen=True)
class StoppingDistribution:
    """Finite-support (sub-)distribution over stopping times.

    ``times`` strictly increasing naturals, ``probs`` positive with total
    mass in (0, 1]. Use :attr:`is_distribution` to require mass exactly 1.
    """

    times: tuple[int, ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        times = tuple(int(t) for t in self.times)
        probs = tuple(as_rational(p) for p in self.probs)
        if not times or len(times) != len(probs):
            raise DistributionError("need one probability per support time")
        if times[0] < 0 or any(a >= b for a, b in zip(times, times[1:])):
            raise DistributionError(f"support times must be strictly increasing naturals: {times}")
        if any(p <= 0 for p in probs):
            raise DistributionError("probabilities must be positive")
        mass = sum(probs, Fraction(0))
        if mass > 1:
            raise DistributionError(f"probability mass {mass} exceeds 1")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, object]]) -> "StoppingDistribution":
        pairs = sorted(pairs)
        return cls(tuple(t for t, _ in pairs), tuple(as_rational(p) for _, p in pairs))

    @classmethod
    def dirac(cls, t: int) -> "StoppingDistribution":
        return cls((t,), (Fraction(1),))

    def items(self):
        return zip(self.times, self.probs)

    @property
    def mass(self) -> Fraction:
        return sum(self.probs, Fraction(0))

    @property
    def is_distribution(self) -> bool:
        return self.mass == 1

    @property
    def expected_time(self) -> Fraction:
        return sum((p * t for t, p in self.items()), Fraction(0)) / self.mass

    @property
    def max_time(self) -> int:
        return self.times[-1]


def expected_utility(seq: Sequence | Lasso, dist: StoppingDistribution, graph: WeightedGraph | None = None) -> Fraction:
    """``(1 / mass) * sum_t u[t] * dist(t)``; lassos need their graph."""
    if isinstance(seq, Lasso):
        if graph is None:
            raise TypeError("a lasso is evaluated against its graph")
        at = lambda t: lasso_utility_at(seq, graph, t)  # noqa: E731
    else:
        if dist.max_time >= len(seq):
            raise DistributionError(f"support reaches t={dist.max_time} but the sequence stops at t={len(seq) - 1}")
        at = seq.__getitem__
    return sum((p * at(t) for t, p in dist.items()), Fraction(0)) / dist.mass


@dataclass(frozen=True)
class LayeredGraph:
    """Layers ``0..k``; hop ``i`` condenses ``hops[i]`` steps of the original graph.

    ``weights[i][v][v']`` is ``tail_mass[i] * (M^hops[i])[v][v']`` (``NEG_INF``
    where no walk of that length exists). Hop 0 starts at time 0, so it spans
    ``t_1`` steps.
    """

    vertex_count: int
    hops: tuple[int, ...]
    tail_mass: tuple[Fraction, ...]
    powers: tuple[MaxPlusMatrix, ...]
    weights: tuple[tuple[tuple, ...], ...]

    @property
    def layers(self) -> int:
        return len(self.hops)


def build_layered_graph(graph: WeightedGraph, dist: StoppingDistribution, cache: PowerCache | None = None) -> LayeredGraph:
    cache = cache or PowerCache(graph)
    prev = 0
    hops, tails, powers, weights = [], [], [], []
    probs = dist.probs
    for i, t in enumerate(dist.times):
        hop = t - prev
        prev = t
        tail = sum(probs[i:], Fraction(0))
        power = cache.power(hop)
        hops.append(hop)
        tails.append(tail)
        powers.append(power)
        weights.append(tuple(tuple(NEG_INF if x == NEG_INF else tail * x for x in row) for row in power.rows))
    return LayeredGraph(graph.vertex_count, tuple(hops), tuple(tails), tuple(powers), tuple(weights))


def specified_value(graph: WeightedGraph, v0: int, dist: StoppingDistribution,
                    witness_bound: int = DEFAULT_WITNESS_BOUND) -> tuple[Fraction, FinitePath | None]:
    """``sup`` over plans of the expected utility under ``dist``.

    Solved as a best ``k``-hop path in the layered graph; the telescoping sum
    of tail-mass-weighted hop gains equals ``sum_j p_j * u[t_j]``. A witness
    path of ``t_k`` edges is expanded only when ``t_k <= witness_bound``.
    """
    if not dist.is_distribution:
        raise DistributionError(f"probability mass is {dist.mass}, not 1")
    cache = PowerCache(graph)
    layered = build_layered_graph(graph, dist, cache)
    n = graph.vertex_count
    best: list = [NEG_INF] * n
    best[v0] = Fraction(0)
    back: list[list[int | None]] = []
    for w in layered.weights:
        nxt: list = [NEG_INF] * n
        arg: list[int | None] = [None] * n
        for v in range(n):
            if best[v] == NEG_INF:
                continue
            row = w[v]
            for v2 in range(n):
                x = row[v2]
                if x == NEG_INF:
                    continue
                cand = best[v] + x
                if cand > nxt[v2]:
                    nxt[v2], arg[v2] = cand, v
        best = nxt
        back.append(arg)
    value = max(x for x in best if x != NEG_INF)
    if dist.max_time > witness_bound:
        return value, None
    layer_vertices = [best.index(value)]
    for arg in reversed(back):
        layer_vertices.append(arg[layer_vertices[-1]])
    layer_vertices.reverse()
    assert layer_vertices[0] == v0
    path = [v0]
    for hop, a, b in zip(layered.hops, layer_vertices, layer_vertices[1:]):
        path.extend(cache.best_path(a, b, hop)[1:])
    return value, FinitePath(tuple(path))


def layered_hop_sum(layered: LayeredGraph, layer_vertices: Sequence[int]) -> Fraction:
    """Sum of hop weights along a layer-by-layer vertex sequence."""
    return sum((layered.weights[i][a][b] for i, (a, b) in enumerate(zip(layer_vertices, layer_vertices[1:]))), Fraction(0))


def telescoped_utility(u: UtilitySequence, dist: StoppingDistribution) -> Fraction:
    """``sum_j p_j * u[t_j]`` written as the tail-mass telescoping sum."""
    total = Fraction(0)
    prev_t = 0
    for i, t in enumerate(dist.times):
        total += sum(dist.probs[i:], Fraction(0)) * (u[t] - u[prev_t])
        prev_t = t
    return total
