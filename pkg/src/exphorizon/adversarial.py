"""Worst case over stopping-time distributions with a fixed expected horizon.

A plan has value at least 0 iff its utilities stay above some line
``M * (t - T)`` through ``(T, 0)``. Finite paths are summarised by their total
weight and the interval of slopes ``M`` that keep them above such a line;
:func:`best_paths` keeps only the maximal summaries per (time, vertex) and
:func:`exists_positive_path` closes them into lassos. The optimal value is
found by binary search over weight shifts, then snapped to the unique
candidate rational with a small denominator.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import FinitePath, Lasso, WeightedGraph, as_rational, first_cycle_at_least, iter_simple_lassos

INF = float("inf")


@dataclass(frozen=True)
class SlopeInterval:
    """Closed interval of slopes; ``lower``/``upper`` of ``None`` mean unbounded."""

    feasible: bool = True
    lower: Fraction | None = None
    upper: Fraction | None = None

    @classmethod
    def empty(cls) -> "SlopeInterval":
        return cls(False, None, None)

    @classmethod
    def of(cls, lower, upper) -> "SlopeInterval":
        if lower is not None and upper is not None and lower > upper:
            return cls.empty()
        return cls(True, lower, upper)

    def __and__(self, other: "SlopeInterval") -> "SlopeInterval":
        if not (self.feasible and other.feasible):
            return SlopeInterval.empty()
        lo = self.lower if other.lower is None else other.lower if self.lower is None else max(self.lower, other.lower)
        hi = self.upper if other.upper is None else other.upper if self.upper is None else min(self.upper, other.upper)
        return SlopeInterval.of(lo, hi)

    def contains(self, other: "SlopeInterval") -> bool:
        """``other`` is a subset of ``self`` (the empty set is a subset of anything)."""
        if not other.feasible:
            return True
        if not self.feasible:
            return False
        if self.lower is not None and (other.lower is None or other.lower < self.lower):
            return False
        if self.upper is not None and (other.upper is None or other.upper > self.upper):
            return False
        return True

    def admits_at_most(self, bound: Fraction) -> bool:
        """Some slope in the interval is ``<= bound``."""
        return self.feasible and (self.lower is None or self.lower <= bound)

    def __contains__(self, m) -> bool:
        return (self.feasible and (self.lower is None or self.lower <= m)
                and (self.upper is None or m <= self.upper))

    def __str__(self) -> str:
        if not self.feasible:
            return "{}"
        lo = "-inf" if self.lower is None else str(self.lower)
        hi = "+inf" if self.upper is None else str(self.upper)
        return f"[{lo}, {hi}]"


def slope_constraint(u, t: int, horizon) -> SlopeInterval:
    """Slopes ``M`` with ``u >= M * (t - T)``."""
    u, horizon = as_rational(u), as_rational(horizon)
    k = t - horizon
    if k < 0:
        return SlopeInterval(True, u / k, None)
    if k > 0:
        return SlopeInterval(True, None, u / k)
    return SlopeInterval() if u >= 0 else SlopeInterval.empty()


def path_constraint(utilities: Sequence, horizon, t0: int = 0, base: SlopeInterval | None = None) -> SlopeInterval:
    """Conjunction of :func:`slope_constraint` over ``utilities[k]`` at time ``t0 + k``."""
    psi = SlopeInterval() if base is None else base
    for k, u in enumerate(utilities):
        psi = psi & slope_constraint(u, t0 + k, horizon)
    return psi


@dataclass(frozen=True)
class RankedPair:
    utility: Fraction
    constraint: SlopeInterval
    witness: FinitePath


def pair_preferred(a: RankedPair, b: RankedPair) -> bool:
    """``a`` has at least ``b``'s weight and a weaker (larger) slope constraint."""
    return a.utility >= b.utility and a.constraint.contains(b.constraint)


def maximal_set(pairs: Iterable[RankedPair]) -> list[RankedPair]:
    """Maximal elements under :func:`pair_preferred`.

    Among equivalent pairs (same weight and interval) the one with the
    lexicographically smallest witness is kept.
    """
    def key(p: RankedPair):
        c = p.constraint
        lo = -INF if c.lower is None else c.lower
        hi = INF if c.upper is None else c.upper
        return (not c.feasible, -p.utility, lo, -hi, p.witness.vertices)

    kept: list[RankedPair] = []
    for p in sorted(pairs, key=key):
        if not any(pair_preferred(k, p) for k in kept):
            kept.append(p)
    return kept


# Internally a pair is the tuple (utility, lower, upper, witness vertices) with
# infinite bounds stored as floats; infeasible pairs are never materialised.

def _extend(u, lo, hi, t: int, horizon: Fraction):
    k = t - horizon
    if k < 0:
        b = u / k
        if b > lo:
            lo = b
    elif k > 0:
        b = u / k
        if b < hi:
            hi = b
    elif u < 0:
        return None
    if lo > hi:
        return None
    return lo, hi


def _antichain(cands: list[tuple]) -> list[tuple]:
    # after sorting, a pair can only be dominated by one placed before it
    cands.sort(key=lambda p: (-p[0], p[1], -p[2], p[3]))
    kept: list[tuple] = []
    for p in cands:
        u, lo, hi = p[0], p[1], p[2]
        for q in kept:
            if q[0] >= u and q[1] <= lo and q[2] >= hi:
                break
        else:
            kept.append(p)
    return kept


def _reverse_distances(graph: WeightedGraph, target: int) -> list[float]:
    pred: list[list[int]] = [[] for _ in range(graph.vertex_count)]
    for s, t, _ in graph.edges():
        pred[t].append(s)
    dist = [INF] * graph.vertex_count
    dist[target] = 0
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for p in pred[v]:
            if dist[p] == INF:
                dist[p] = dist[v] + 1
                queue.append(p)
    return dist


def _best_paths_raw(graph, t0, v0, u0, lo0, hi0, horizon, steps, goal_dist=None):
    """Levels ``0..steps`` of the table as lists of ``{vertex: [pair, ...]}``.

    With ``goal_dist`` (hop distances to a goal vertex) a state is dropped when
    the goal cannot be reached within the remaining steps.
    """
    n = graph.vertex_count
    bound = n ** 4
    levels = [{v0: [(u0, lo0, hi0, (v0,))]}]
    for i in range(1, steps + 1):
        t = t0 + i
        incoming: dict[int, list] = {}
        for v1, pairs in levels[-1].items():
            for v in graph.successors(v1):
                if goal_dist is not None and goal_dist[v] > steps - i:
                    continue
                w = graph.weight(v1, v)
                bucket = incoming.setdefault(v, [])
                for u1, lo1, hi1, wit in pairs:
                    u = u1 + w
                    ext = _extend(u, lo1, hi1, t, horizon)
                    if ext is not None:
                        bucket.append((u, ext[0], ext[1], wit + (v,)))
        level = {}
        for v in sorted(incoming):
            if incoming[v]:
                level[v] = _antichain(incoming[v])
                if len(level[v]) > bound:
                    raise AssertionError(f"table entry ({t}, {v}) has {len(level[v])} > |V|^4 pairs")
        levels.append(level)
    return levels


def _to_interval(lo, hi) -> SlopeInterval:
    return SlopeInterval(True, None if lo == -INF else lo, None if hi == INF else hi)


def _from_interval(psi: SlopeInterval):
    return (-INF if psi.lower is None else psi.lower, INF if psi.upper is None else psi.upper)


class BestPathsTable(dict):
    """``(t, v) -> list[RankedPair]``; witnesses start at the table's origin."""

    def entry(self, t: int, v: int) -> list[RankedPair]:
        return self.get((t, v), [])


def best_paths(graph: WeightedGraph, t0: int, v0: int, u0, psi0: SlopeInterval, horizon,
               steps: int | None = None) -> BestPathsTable:
    """Maximal (weight, slope interval) pairs of the extensions of a prefix.

    The prefix has ``t0`` edges, ends at ``v0``, has weight ``u0`` and slope
    interval ``psi0``. Entry ``(t0 + i, v)`` summarises the ``i``-edge paths
    from ``v0`` to ``v`` for ``i = 0 .. |V|``: each stored pair belongs to one
    such path (its witness), and every such path is dominated by a stored pair.
    """
    if not psi0.feasible:
        raise ValueError("initial slope interval must be feasible")
    steps = graph.vertex_count if steps is None else steps
    lo0, hi0 = _from_interval(psi0)
    levels = _best_paths_raw(graph, t0, v0, as_rational(u0), lo0, hi0, as_rational(horizon), steps)
    table = BestPathsTable()
    for i, level in enumerate(levels):
        for v, pairs in level.items():
            table[(t0 + i, v)] = [RankedPair(u, _to_interval(lo, hi), FinitePath(wit)) for u, lo, hi, wit in pairs]
    return table


def _decide(graph: WeightedGraph, v0: int, horizon: Fraction):
    """Search for a lasso with value >= 0; returns ``(lasso, slope)`` or ``None``.

    ``slope`` is a line slope ``M`` with every utility of the lasso at least
    ``M * (t - T)``.
    """
    n = graph.vertex_count
    lo0, hi0 = _from_interval(slope_constraint(0, 0, horizon))  # u[0] = 0 is a stopping point
    first = _best_paths_raw(graph, 0, v0, Fraction(0), lo0, hi0, horizon, n)
    to_goal = {}
    for i in range(n + 1):
        for v_hat in sorted(first[i]):
            if v_hat not in to_goal:
                to_goal[v_hat] = _reverse_distances(graph, v_hat)
            dist = to_goal[v_hat]
            remaining = n - i
            # v_hat must lie on a closed walk of length <= remaining
            if remaining < 1 or min((dist[s] for s in graph.successors(v_hat)), default=INF) + 1 > remaining:
                continue
            for u1, lo1, hi1, wit1 in first[i][v_hat]:
                second = _best_paths_raw(graph, i, v_hat, u1, lo1, hi1, horizon, remaining, goal_dist=dist)
                for j in range(1, remaining + 1):
                    for u2, lo2, hi2, wit2 in second[j].get(v_hat, ()):
                        cycle_mean = (u2 - u1) / j
                        if lo2 <= cycle_mean:
                            lasso = Lasso(FinitePath(wit1), FinitePath(wit2))
                            return lasso, lo2
    return None


def exists_positive_path(graph: WeightedGraph, v0: int, horizon) -> tuple[bool, Lasso | None]:
    """Decide whether some plan from ``v0`` has adversarial value >= 0.

    The witness is a lasso with ``|stem| + |cycle| <= |V|`` whose utilities
    stay above a line through ``(T, 0)``; it need not be simple.
    """
    horizon = as_rational(horizon)
    if horizon <= 0:
        raise ValueError("expected horizon must be positive")
    found = _decide(graph, v0, horizon)
    return (True, found[0]) if found else (False, None)


def shift_weights(graph: WeightedGraph, eta) -> WeightedGraph:
    eta = as_rational(eta)
    return WeightedGraph(graph.vertex_count, [(s, t, w + eta) for s, t, w in graph.edges()])


def bounded_denominator_rational(lo, hi, qmax: int) -> Fraction:
    """Simplest rational in ``[lo, hi]``, found by Stern-Brocot descent.

    Raises ``ValueError`` if its denominator exceeds ``qmax``. When
    ``hi - lo < 1 / qmax**2`` there is at most one rational in the interval
    with denominator ``<= qmax``, so the answer is that one.
    """
    lo, hi = as_rational(lo), as_rational(hi)
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    base = math.floor(lo)
    lo, hi = lo - base, hi - base
    if lo == 0:
        return Fraction(base)
    if hi >= 1:
        return Fraction(base + 1)
    # 0 < lo <= hi < 1
    ln, ld, rn, rd = 0, 1, 1, 1
    while True:
        mn, md = ln + rn, ld + rd
        if md > qmax:
            raise ValueError(f"no rational with denominator <= {qmax} in [{lo + base}, {hi + base}]")
        m = Fraction(mn, md)
        if m < lo:
            ln, ld = mn, md
        elif m > hi:
            rn, rd = mn, md
        else:
            return m + base


def _threshold_probe(graph: WeightedGraph, v0: int, horizon: Fraction, level: Fraction):
    """``val(G, T) >= level`` iff the graph shifted by ``-level / T`` has a plan of value >= 0."""
    shifted = shift_weights(graph, -level / horizon)
    return shifted, _decide(shifted, v0, horizon)


def decide_threshold(graph: WeightedGraph, v0: int, horizon, level) -> tuple[bool, Lasso | None]:
    """Is there a plan from ``v0`` with adversarial value at least ``level``?"""
    horizon, level = as_rational(horizon), as_rational(level)
    if horizon <= 0:
        raise ValueError("expected horizon must be positive")
    _, found = _threshold_probe(graph, v0, horizon, level)
    return (True, found[0]) if found else (False, None)


@dataclass(frozen=True)
class SearchTrace:
    probes: int
    lower: Fraction
    upper: Fraction


def value_scale(graph: WeightedGraph, horizon) -> int:
    """``d * D``: denominators of ``T`` and of all weights, multiplied out.

    Scaling weights by ``D`` makes them integral, so ``val * d * D`` is a
    fraction with denominator at most ``|V|``.
    """
    weight_lcm = 1
    for _, _, w in graph.edges():
        weight_lcm = math.lcm(weight_lcm, w.denominator)
    return as_rational(horizon).denominator * weight_lcm


def adversarial_value(graph: WeightedGraph, v0: int, horizon, trace: list | None = None) -> tuple[Fraction, Lasso]:
    """Optimal worst-case expected utility over plans, and a simple lasso attaining it.

    With ``s`` from :func:`value_scale`, ``val * s`` is a fraction with
    denominator at most ``|V|`` and ``val`` lies in ``[-W*T, W*T]``. Bisection
    on the threshold stops once the bracket is narrower than
    ``1 / (|V|^2 s^2)``; the value is then the unique admissible rational left
    in the bracket.
    """
    horizon = as_rational(horizon)
    if horizon < 0:
        raise ValueError("expected horizon must be nonnegative")
    if horizon == 0:
        # only the Dirac at 0 has expected time 0, and u[0] = 0
        return Fraction(0), next(iter_simple_lassos(graph, v0))
    n = graph.vertex_count
    scale = value_scale(graph, horizon)
    w = graph.max_abs_weight
    lo, hi = -w * horizon, w * horizon + 1  # val(G, T) is in [lo, hi)
    width = Fraction(1, n * n * scale * scale)
    probes = 0
    while hi - lo >= width:
        mid = (lo + hi) / 2
        probes += 1
        if _threshold_probe(graph, v0, horizon, mid)[1] is not None:
            lo = mid
        else:
            hi = mid
    value = bounded_denominator_rational(lo * scale, hi * scale, n) / scale
    shifted, found = _threshold_probe(graph, v0, horizon, value)
    probes += 1
    if found is None:
        raise AssertionError(f"recovered value {value} fails its own threshold probe")
    if trace is not None:
        trace.append(SearchTrace(probes, lo, hi))
    lasso, slope = found
    # cutting cycles below the line's slope and closing the first one above it keeps the line below
    plan = first_cycle_at_least(lasso, shifted, slope)
    return value, plan


def value_space_bounds(graph: WeightedGraph, horizon) -> tuple[int, int]:
    """``(pmax, qmax)``: ``val * s = p / q`` with ``|p| <= pmax`` and ``1 <= q <= qmax``.

    ``s`` is :func:`value_scale`. The bound ``2 W |V|^2`` is applied to the
    integer-weight graph and widened by ``d`` and by ``max(1, T / |V|)`` for
    horizons longer than the graph.
    """
    horizon = as_rational(horizon)
    n = graph.vertex_count
    scale = value_scale(graph, horizon)
    w = graph.max_abs_weight
    reach = max(Fraction(n), horizon)
    return math.ceil(2 * w * n * reach * scale), n


def in_value_space(value, graph: WeightedGraph, horizon) -> bool:
    pmax, qmax = value_space_bounds(graph, horizon)
    scaled = as_rational(value) * value_scale(graph, horizon)
    return scaled.denominator <= qmax and abs(scaled.numerator) <= pmax


@dataclass(frozen=True)
class DownPoint:
    t_left: int
    v_left: int
    t_right: int | None = None
    v_right: int | None = None


def downpoint(vertices: Sequence[int], utilities: Sequence, horizon, t0: int = 0) -> DownPoint:
    """Times (and vertices) of the constraints that pin a path's slope interval.

    ``vertices[k]`` is visited at time ``t0 + k`` with weight ``utilities[k]``.
    Ties go to the earliest time.
    """
    horizon = as_rational(horizon)
    left = right = None
    for k, u in enumerate(utilities):
        t = t0 + k
        if t < horizon:
            b = as_rational(u) / (t - horizon)
            if left is None or b > left[0]:
                left = (b, k)
        elif t > horizon:
            b = as_rational(u) / (t - horizon)
            if right is None or b < right[0]:
                right = (b, k)
    if left is None:
        raise ValueError("path has no time before the horizon")
    kl = left[1]
    if right is None:
        return DownPoint(t0 + kl, vertices[kl])
    kr = right[1]
    return DownPoint(t0 + kl, vertices[kl], t0 + kr, vertices[kr])
