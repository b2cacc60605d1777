"""Exact arithmetic, weighted graphs, paths, lassos and cycle decomposition.

Utilities are indexed by the number of edges traversed: ``u[0] = 0`` and
``u[t]`` is the sum of the first ``t`` edge weights.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction (no floats)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    return Fraction(x)


class GraphError(ValueError):
    """Raised when a weighted graph violates its structural invariants."""


class InvalidPathError(ValueError):
    pass


class WeightedGraph:
    """Finite directed graph with exact rational edge weights.

    Vertices are ``0 .. vertex_count - 1``. Every vertex needs at least one
    outgoing edge so that any finite path extends to an infinite plan.
    """

    __slots__ = ("vertex_count", "_weights", "_succ")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int, object]]):
        if vertex_count < 1:
            raise GraphError("graph needs at least one vertex")
        weights: dict[tuple[int, int], Fraction] = {}
        for src, dst, w in edges:
            for v in (src, dst):
                if not (0 <= v < vertex_count):
                    raise GraphError(f"vertex {v} out of range [0, {vertex_count})")
            if (src, dst) in weights:
                raise GraphError(f"duplicate edge ({src}, {dst})")
            weights[(src, dst)] = as_rational(w)
        succ: list[list[int]] = [[] for _ in range(vertex_count)]
        for src, dst in weights:
            succ[src].append(dst)
        for v, out in enumerate(succ):
            if not out:
                raise GraphError(f"vertex {v} has no outgoing edge")
            out.sort()
        self.vertex_count = vertex_count
        self._weights = weights
        self._succ = tuple(tuple(out) for out in succ)

    def successors(self, v: int) -> tuple[int, ...]:
        return self._succ[v]

    def weight(self, src: int, dst: int) -> Fraction:
        try:
            return self._weights[(src, dst)]
        except KeyError:
            raise InvalidPathError(f"no edge ({src}, {dst})") from None

    def has_edge(self, src: int, dst: int) -> bool:
        return (src, dst) in self._weights

    @property
    def weights(self) -> Mapping[tuple[int, int], Fraction]:
        return dict(self._weights)

    def edges(self) -> list[tuple[int, int, Fraction]]:
        return [(s, t, self._weights[(s, t)]) for s in range(self.vertex_count) for t in self._succ[s]]

    @property
    def max_abs_weight(self) -> Fraction:
        return max(abs(w) for w in self._weights.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self._weights == other._weights

    def __hash__(self) -> int:
        return hash((self.vertex_count, frozenset(self._weights.items())))

    def __repr__(self) -> str:
        return f"WeightedGraph({self.vertex_count}, {self.edges()!r})"


@dataclass(frozen=True)
class FinitePath:
    """A finite path given by its vertex sequence; ``len(vertices) - 1`` edges."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise InvalidPathError("a path has at least its start vertex")
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @classmethod
    def from_edges(cls, start: int, edges: Iterable[tuple[int, int]]) -> "FinitePath":
        vs = [start]
        for src, dst in edges:
            if src != vs[-1]:
                raise InvalidPathError(f"edge ({src}, {dst}) does not continue from {vs[-1]}")
            vs.append(dst)
        return cls(tuple(vs))

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return list(zip(vs, vs[1:]))

    def concat(self, other: "FinitePath") -> "FinitePath":
        if other.start != self.end:
            raise InvalidPathError(f"cannot append a path starting at {other.start} to one ending at {self.end}")
        return FinitePath(self.vertices + other.vertices[1:])

    def is_closed(self) -> bool:
        return len(self) > 0 and self.start == self.end

    def is_acyclic(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def check(self, graph: WeightedGraph) -> None:
        for v in self.vertices:
            if not (0 <= v < graph.vertex_count):
                raise InvalidPathError(f"vertex {v} not in graph")
        for src, dst in self.edges():
            if not graph.has_edge(src, dst):
                raise InvalidPathError(f"no edge ({src}, {dst})")

    def weights(self, graph: WeightedGraph) -> list[Fraction]:
        return [graph.weight(s, t) for s, t in self.edges()]

    def total(self, graph: WeightedGraph) -> Fraction:
        return sum(self.weights(graph), Fraction(0))

    def __str__(self) -> str:
        return " ".join(map(str, self.vertices))


class UtilitySequence(tuple):
    """``u[0], u[1], ...`` with ``u[0] = 0`` and ``u[t+1] - u[t]`` the (t+1)-th weight."""

    def __new__(cls, values: Iterable):
        return super().__new__(cls, (as_rational(v) for v in values))


def utility_sequence(path: FinitePath, graph: WeightedGraph) -> UtilitySequence:
    acc = Fraction(0)
    out = [acc]
    for w in path.weights(graph):
        acc += w
        out.append(acc)
    return UtilitySequence(out)


@dataclass(frozen=True)
class Lasso:
    """The infinite path ``stem . cycle^omega``; ``stem`` may have no edges."""

    stem: FinitePath
    cycle: FinitePath

    def __post_init__(self):
        if not self.cycle.is_closed():
            raise InvalidPathError("lasso cycle must be a nonempty closed walk")
        if self.cycle.start != self.stem.end:
            raise InvalidPathError("lasso cycle must start where the stem ends")

    @classmethod
    def from_vertices(cls, stem: Iterable[int], cycle: Iterable[int]) -> "Lasso":
        return cls(FinitePath(tuple(stem)), FinitePath(tuple(cycle)))

    @property
    def start(self) -> int:
        return self.stem.start

    def finite_path(self) -> FinitePath:
        """The finite path ``stem . cycle``."""
        return self.stem.concat(self.cycle)

    def unroll(self, n_edges: int) -> FinitePath:
        """Prefix of the infinite path with ``n_edges`` edges."""
        vs = list(self.stem.vertices[: n_edges + 1])
        body = self.cycle.vertices[1:]
        i = 0
        while len(vs) < n_edges + 1:
            vs.append(body[i % len(body)])
            i += 1
        return FinitePath(tuple(vs))

    def is_simple(self) -> bool:
        # every strict prefix of stem.cycle is acyclic <=> all vertices distinct but the closing one
        vs = self.finite_path().vertices
        return len(set(vs[:-1])) == len(vs) - 1

    def check(self, graph: WeightedGraph) -> None:
        self.stem.check(graph)
        self.cycle.check(graph)

    def cycle_sum(self, graph: WeightedGraph) -> Fraction:
        return self.cycle.total(graph)

    def cycle_mean(self, graph: WeightedGraph) -> Fraction:
        return self.cycle.total(graph) / len(self.cycle)

    def __str__(self) -> str:
        return f"{self.stem} | {self.cycle}"


def lasso_utility_at(lasso: Lasso, graph: WeightedGraph, t: int) -> Fraction:
    """``u[t]`` along ``stem . cycle^omega``."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    a = len(lasso.stem)
    stem_w = lasso.stem.weights(graph)
    if t <= a:
        return sum(stem_w[:t], Fraction(0))
    cyc_w = lasso.cycle.weights(graph)
    laps, rem = divmod(t - a, len(cyc_w))
    return sum(stem_w, Fraction(0)) + laps * sum(cyc_w, Fraction(0)) + sum(cyc_w[:rem], Fraction(0))


def lasso_utilities(lasso: Lasso, graph: WeightedGraph, horizon: int) -> UtilitySequence:
    """``u[0..horizon]`` along the lasso."""
    return utility_sequence(lasso.unroll(horizon), graph)


@dataclass(frozen=True)
class DecomposedCycle:
    path: FinitePath
    positions: tuple[int, ...]  # indices of its edges in the decomposed path

    def mean(self, graph: WeightedGraph) -> Fraction:
        return self.path.total(graph) / len(self.path)


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple[DecomposedCycle, ...]
    residual: FinitePath
    residual_positions: tuple[int, ...]

    def reconstruct(self) -> FinitePath:
        """Reassemble the input path from the edge positions of every piece."""
        by_pos: dict[int, tuple[int, int]] = {}
        pieces = [(c.path, c.positions) for c in self.cycles] + [(self.residual, self.residual_positions)]
        for path, positions in pieces:
            for pos, edge in zip(positions, path.edges()):
                if pos in by_pos:
                    raise AssertionError(f"edge position {pos} used twice")
                by_pos[pos] = edge
        if sorted(by_pos) != list(range(len(by_pos))):
            raise AssertionError("edge positions are not contiguous")
        return FinitePath.from_edges(self.residual.start, (by_pos[i] for i in range(len(by_pos))))


def cycle_decomposition(path: FinitePath, graph: WeightedGraph | None = None) -> CycleDecomposition:
    """Push edges on a stack; every time a simple cycle closes, pop it and emit it."""
    if graph is not None:
        path.check(graph)
    stack = [path.start]
    stack_pos: list[int] = []
    index = {path.start: 0}
    cycles = []
    for pos, v in enumerate(path.vertices[1:]):
        if v in index:
            k = index[v]
            cycles.append(DecomposedCycle(FinitePath(tuple(stack[k:]) + (v,)), tuple(stack_pos[k:]) + (pos,)))
            for u in stack[k + 1:]:
                del index[u]
            del stack[k + 1:]
            del stack_pos[k:]
        else:
            stack_pos.append(pos)
            index[v] = len(stack)
            stack.append(v)
    return CycleDecomposition(tuple(cycles), FinitePath(tuple(stack)), tuple(stack_pos))


def first_cycle_at_least(lasso: Lasso, graph: WeightedGraph, threshold: Fraction, max_laps: int | None = None) -> Lasso:
    """Cycle surgery along ``stem . cycle^omega`` against a slope ``threshold``.

    Cycles of the decomposition are visited in closing order; those with mean
    below ``threshold`` are cut out of the path and the first one with mean at
    least ``threshold`` is closed into a simple lasso. Cutting a cycle out
    leaves exactly the stack content, so the stem of the result is the stack
    at the moment the kept cycle starts.
    """
    if max_laps is None:
        max_laps = graph.vertex_count + 3
    horizon = len(lasso.stem) + max_laps * len(lasso.cycle)
    stack = [lasso.start]
    index = {lasso.start: 0}
    for v in lasso.unroll(horizon).vertices[1:]:
        if v in index:
            k = index[v]
            cyc = FinitePath(tuple(stack[k:]) + (v,))
            if cyc.total(graph) >= threshold * len(cyc):
                return Lasso(FinitePath(tuple(stack[: k + 1])), cyc)
            for u in stack[k + 1:]:
                del index[u]
            del stack[k + 1:]
        else:
            index[v] = len(stack)
            stack.append(v)
    raise AssertionError(f"no cycle with mean >= {threshold} within {max_laps} laps")


def iter_simple_lassos(graph: WeightedGraph, v0: int) -> Iterator[Lasso]:
    """Every simple lasso from ``v0``, in lexicographic order of ``stem . cycle``.

    Simple lassos are exactly the paths induced by stationary plans.
    """
    path = [v0]
    on_path = {v0: 0}

    def extend() -> Iterator[Lasso]:
        for s in graph.successors(path[-1]):
            k = on_path.get(s)
            if k is not None:
                yield Lasso(FinitePath(tuple(path[: k + 1])), FinitePath(tuple(path[k:]) + (s,)))
            else:
                on_path[s] = len(path)
                path.append(s)
                yield from extend()
                path.pop()
                del on_path[s]

    yield from extend()
