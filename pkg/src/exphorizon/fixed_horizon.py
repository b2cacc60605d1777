"""Fixed horizon planning: Bellman recursion, max-plus powering, stationary plans.

Also builds the reduction gadget showing that optimizing over stationary
plans at a fixed horizon is NP-hard.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core import FinitePath, Lasso, WeightedGraph, iter_simple_lassos, lasso_utility_at

NEG_INF = float("-inf")  # sentinel only; finite entries are always Fractions

DEFAULT_PLAN_BUDGET = 10**6


class EnumerationTooLarge(RuntimeError):
    pass


class MaxPlusMatrix:
    """Square matrix over the (max, +) semiring; missing edges are ``NEG_INF``."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("max-plus matrix must be square")
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, n: int) -> "MaxPlusMatrix":
        return cls([[Fraction(0) if i == j else NEG_INF for j in range(n)] for i in range(n)])

    @classmethod
    def from_graph(cls, graph: WeightedGraph) -> "MaxPlusMatrix":
        n = graph.vertex_count
        rows = [[NEG_INF] * n for _ in range(n)]
        for s, t, w in graph.edges():
            rows[s][t] = w
        return cls(rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "MaxPlusMatrix") -> "MaxPlusMatrix":
        return maxplus_multiply(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, MaxPlusMatrix) and self.rows == other.rows

    def __repr__(self) -> str:
        return f"MaxPlusMatrix({[list(r) for r in self.rows]!r})"


def maxplus_multiply(a: MaxPlusMatrix, b: MaxPlusMatrix) -> MaxPlusMatrix:
    """``C[i][j] = max_k A[i][k] + B[k][j]``."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    n = a.dim
    cols = list(zip(*b.rows))
    out = []
    for row in a.rows:
        finite = [(k, x) for k, x in enumerate(row) if x != NEG_INF]
        new_row = []
        for j in range(n):
            col = cols[j]
            best = NEG_INF
            for k, x in finite:
                y = col[k]
                if y != NEG_INF:
                    s = x + y
                    if s > best:
                        best = s
            new_row.append(best)
        out.append(new_row)
    return MaxPlusMatrix(out)


def maxplus_power(m: MaxPlusMatrix, k: int) -> MaxPlusMatrix:
    """``m^k`` by repeated squaring over the bits of ``k``."""
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    result = MaxPlusMatrix.identity(m.dim)
    square = m
    while k:
        if k & 1:
            result = result @ square
        k >>= 1
        if k:
            square = square @ square
    return result


class PowerCache:
    """Memoized max-plus powers of a graph's matrix, with argmax path recovery."""

    def __init__(self, graph: WeightedGraph):
        self.graph = graph
        self.base = MaxPlusMatrix.from_graph(graph)
        self._cache: dict[int, MaxPlusMatrix] = {
            0: MaxPlusMatrix.identity(graph.vertex_count),
            1: self.base,
        }

    def power(self, k: int) -> MaxPlusMatrix:
        got = self._cache.get(k)
        if got is None:
            half = self.power(k // 2)
            got = half @ half
            if k % 2:
                got = got @ self.base
            self._cache[k] = got
        return got

    def best_path(self, src: int, dst: int, k: int) -> list[int]:
        """Vertices of a maximum-weight ``k``-edge path from ``src`` to ``dst``."""
        if self.power(k)[src, dst] == NEG_INF:
            raise ValueError(f"no {k}-edge path from {src} to {dst}")
        if k == 0:
            return [src]
        if k == 1:
            return [src, dst]
        h1 = k // 2
        left, right = self.power(h1), self.power(k - h1)
        target = self.power(k)[src, dst]
        for mid in range(self.graph.vertex_count):
            x, y = left[src, mid], right[mid, dst]
            if x != NEG_INF and y != NEG_INF and x + y == target:
                return self.best_path(src, mid, h1) + self.best_path(mid, dst, k - h1)[1:]
        raise AssertionError("max-plus product has no argmax midpoint")


def maxplus_power_value(graph: WeightedGraph, v0: int, horizon: int) -> Fraction:
    """Best weight of a ``horizon``-edge path from ``v0``: max over the row of ``v0`` in ``M^T``."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    row = maxplus_power(MaxPlusMatrix.from_graph(graph), horizon).rows[v0]
    return max(x for x in row if x != NEG_INF)


def value_iteration(graph: WeightedGraph, v0: int, horizon: int) -> tuple[Fraction, FinitePath]:
    """Backward induction ``A_t(v) = max_v' w(v, v') + A_{t-1}(v')`` with ``A_0 = 0``.

    Returns the optimal value and a witness path of exactly ``horizon`` edges.
    Ties go to the smallest successor id.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    n = graph.vertex_count
    values = [Fraction(0)] * n
    choices: list[list[int]] = []
    for _ in range(horizon):
        new_values = []
        choice = []
        for v in range(n):
            best, arg = None, None
            for s in graph.successors(v):
                x = graph.weight(v, s) + values[s]
                if best is None or x > best:
                    best, arg = x, s
            new_values.append(best)
            choice.append(arg)
        values = new_values
        choices.append(choice)
    path = [v0]
    for choice in reversed(choices):
        path.append(choice[path[-1]])
    return values[v0], FinitePath(tuple(path))


@dataclass(frozen=True)
class StationaryPlan:
    """One chosen successor per vertex."""

    choice: Mapping[int, int]

    def lasso(self, v0: int) -> Lasso:
        path = [v0]
        seen = {v0: 0}
        while True:
            nxt = self.choice[path[-1]]
            if nxt in seen:
                k = seen[nxt]
                return Lasso(FinitePath(tuple(path[: k + 1])), FinitePath(tuple(path[k:]) + (nxt,)))
            seen[nxt] = len(path)
            path.append(nxt)

    @classmethod
    def from_lasso(cls, graph: WeightedGraph, lasso: Lasso) -> "StationaryPlan":
        choice = {v: graph.successors(v)[0] for v in range(graph.vertex_count)}
        for s, t in lasso.finite_path().edges():
            choice[s] = t
        return cls(choice)


def _stationary_objective(graph: WeightedGraph, lasso: Lasso, distribution) -> Fraction:
    total = sum((p * lasso_utility_at(lasso, graph, t) for t, p in distribution.items()), Fraction(0))
    return total / distribution.mass


def best_stationary(graph: WeightedGraph, v0: int, distribution, budget: int = DEFAULT_PLAN_BUDGET) -> tuple[Fraction, StationaryPlan]:
    """Exhaustive search over stationary plans for a finite-support distribution.

    Only choices at vertices reachable under the plan matter, so plans are
    enumerated as the simple lassos they induce from ``v0``. Raises
    ``EnumerationTooLarge`` once more than ``budget`` plans have been tried.
    """
    best_value, best_lasso = None, None
    for count, lasso in enumerate(iter_simple_lassos(graph, v0), start=1):
        if count > budget:
            raise EnumerationTooLarge(f"more than {budget} stationary plans from vertex {v0}")
        value = _stationary_objective(graph, lasso, distribution)
        if best_value is None or value > best_value:
            best_value, best_lasso = value, lasso
    return best_value, StationaryPlan.from_lasso(graph, best_lasso)


def build_np_gadget(base: WeightedGraph, v1: int, v2: int) -> tuple[WeightedGraph, int, Fraction, int]:
    """Reduction from "is there a simple cycle through v1 and v2".

    Returns ``(graph, horizon, threshold, start)``: a stationary plan from
    ``start`` reaches utility ``threshold = n + 2`` at ``horizon = n + 1``
    iff the base graph (on ``n`` vertices) has such a cycle. The base graph's
    own weights are ignored. ``start`` copies the out-edges of ``v1``.
    """
    n = base.vertex_count
    if v1 == v2:
        raise ValueError("v1 and v2 must differ")
    start, sink = n, n + 1
    edges = []
    for s, t, _ in base.edges():
        edges.append((s, t, 1 if s == v2 else 0))
    edges.append((v1, sink, n + 1))
    edges.append((sink, sink, 0))
    for t in base.successors(v1):
        edges.append((start, t, 0))
    return WeightedGraph(n + 2, edges), n + 1, Fraction(n + 2), start
