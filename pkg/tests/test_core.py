import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from exphorizon.core import (FinitePath, GraphError, InvalidPathError, Lasso, UtilitySequence, WeightedGraph,
                             as_rational, cycle_decomposition, first_cycle_at_least, iter_simple_lassos,
                             lasso_utility_at, lasso_utilities, utility_sequence)
from exphorizon.instances import fig1, fig2, random_graph

from strategies import graphs, random_walk


def loop(c):
    return WeightedGraph(1, [(0, 0, c)])


class TestRational:
    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            as_rational(0.5)

    def test_parses_strings(self):
        assert as_rational("-3/6") == Fraction(-1, 2)

    def test_normalized(self):
        x = as_rational(Fraction(4, -6))
        assert (x.numerator, x.denominator) == (-2, 3)


class TestGraph:
    def test_totality_names_vertex(self):
        with pytest.raises(GraphError, match="vertex 1"):
            WeightedGraph(2, [(0, 1, 0)])

    def test_duplicate_edge(self):
        with pytest.raises(GraphError, match="duplicate"):
            WeightedGraph(1, [(0, 0, 1), (0, 0, 2)])

    def test_out_of_range(self):
        with pytest.raises(GraphError, match="out of range"):
            WeightedGraph(1, [(0, 3, 1)])

    def test_successors_sorted(self):
        g = WeightedGraph(3, [(0, 2, 1), (0, 1, 1), (1, 1, 0), (2, 2, 0)])
        assert g.successors(0) == (1, 2)

    def test_missing_edge(self):
        with pytest.raises(InvalidPathError):
            loop(1).weight(0, 1)


class TestUtilitySequence:
    def test_empty_path(self):
        assert utility_sequence(FinitePath((0,)), loop(3)) == (0,)

    def test_self_loop_three_times(self):
        assert utility_sequence(FinitePath((0, 0, 0, 0)), loop(5)) == (0, 5, 10, 15)

    def test_fig1_cycle_one_lap(self):
        assert utility_sequence(FinitePath((0, 1, 2, 0)), fig1(3)) == (0, -1, -1, 0)

    def test_invalid_edge(self):
        with pytest.raises(InvalidPathError):
            utility_sequence(FinitePath((0, 2)), fig1(3))

    @given(graphs(), st.integers(0, 30), st.integers(0, 2**32))
    def test_differences_are_weights(self, g, length, seed):
        path = random_walk(g, 0, length, random.Random(seed))
        u = utility_sequence(path, g)
        assert len(u) == length + 1 and u[0] == 0
        assert [b - a for a, b in zip(u, u[1:])] == path.weights(g)


class TestCycleDecomposition:
    def test_two_cycles_and_empty_residual(self):
        dec = cycle_decomposition(FinitePath((0, 1, 0, 0)))
        assert [c.path.vertices for c in dec.cycles] == [(0, 1, 0), (0, 0)]
        assert dec.residual.vertices == (0,)

    def test_acyclic(self):
        dec = cycle_decomposition(FinitePath((0, 1, 2)))
        assert dec.cycles == () and dec.residual.vertices == (0, 1, 2)

    def test_nested_cycles(self):
        dec = cycle_decomposition(FinitePath((0, 1, 2, 1, 0)))
        assert [c.path.vertices for c in dec.cycles] == [(1, 2, 1), (0, 1, 0)]
        assert dec.residual.vertices == (0,)
        assert [c.positions for c in dec.cycles] == [(1, 2), (0, 3)]

    def test_checks_against_graph(self):
        with pytest.raises(InvalidPathError):
            cycle_decomposition(FinitePath((0, 2)), fig1(3))

    @given(graphs(max_vertices=8), st.integers(0, 200), st.integers(0, 2**32))
    def test_reconstruction_and_stack_bound(self, g, length, seed):
        path = random_walk(g, 0, length, random.Random(seed))
        dec = cycle_decomposition(path, g)
        assert dec.reconstruct() == path
        assert len(dec.residual.vertices) <= g.vertex_count
        assert dec.residual.is_acyclic()
        for c in dec.cycles:
            assert c.path.is_closed() and len(set(c.path.vertices[:-1])) == len(c.path)

    @given(graphs(max_vertices=8), st.integers(0, 200), st.integers(0, 2**32))
    def test_stack_bound_at_every_prefix(self, g, length, seed):
        path = random_walk(g, 0, length, random.Random(seed))
        for k in range(0, length + 1, 7):
            assert len(cycle_decomposition(FinitePath(path.vertices[: k + 1])).residual.vertices) <= g.vertex_count


class TestLasso:
    def test_self_loop(self):
        assert lasso_utility_at(Lasso.from_vertices([0], [0, 0]), loop(2), 7) == 14

    def test_stem_then_losing_loop(self):
        g = WeightedGraph(2, [(0, 1, 1), (1, 1, -1)])
        assert lasso_utility_at(Lasso.from_vertices([0, 1], [1, 1]), g, 4) == -2

    def test_fig1_cycling_forever(self):
        assert lasso_utility_at(Lasso.from_vertices([0], [0, 1, 2, 0]), fig1(3), 7) == -1

    def test_cycle_must_close(self):
        with pytest.raises(InvalidPathError):
            Lasso.from_vertices([0], [0, 1])

    def test_cycle_must_start_at_stem_end(self):
        with pytest.raises(InvalidPathError):
            Lasso.from_vertices([0, 1], [0, 0])

    def test_simplicity(self):
        assert Lasso.from_vertices([0, 1], [1, 2, 1]).is_simple()
        assert not Lasso.from_vertices([0, 1], [1, 2, 0, 1]).is_simple()
        assert not Lasso.from_vertices([0, 1, 0], [0, 1, 0]).is_simple()
        assert not Lasso.from_vertices([0], [0, 1, 0, 1, 0]).is_simple()

    def test_unroll_matches_utilities(self):
        g = fig1(3)
        lasso = Lasso.from_vertices([0], [0, 1, 2, 0])
        u = lasso_utilities(lasso, g, 20)
        assert all(u[t] == lasso_utility_at(lasso, g, t) for t in range(21))

    @given(graphs(), st.integers(0, 2**32), st.integers(0, 40))
    def test_periodicity(self, g, seed, t):
        from strategies import random_lasso
        lasso = random_lasso(g, random.Random(seed))
        t = t + len(lasso.stem)
        c = len(lasso.cycle)
        assert lasso_utility_at(lasso, g, t + c) - lasso_utility_at(lasso, g, t) == lasso.cycle_sum(g)


class TestSimpleLassos:
    def test_self_loop_only(self):
        assert list(iter_simple_lassos(loop(1), 0)) == [Lasso.from_vertices([0], [0, 0])]

    def test_two_vertices(self):
        g = WeightedGraph(2, [(0, 0, 0), (0, 1, 0), (1, 1, 0)])
        assert [str(l) for l in iter_simple_lassos(g, 0)] == ["0 | 0 0", "0 1 | 1 1"]

    @given(graphs(max_vertices=6))
    def test_all_simple_and_distinct(self, g):
        got = list(iter_simple_lassos(g, 0))
        assert len(set(got)) == len(got)
        assert all(l.is_simple() and len(l.stem) + len(l.cycle) <= g.vertex_count for l in got)


class TestCycleSurgery:
    def test_keeps_first_cycle_at_least_threshold(self):
        g = WeightedGraph(3, [(0, 1, -10), (1, 0, -10), (0, 2, 0), (2, 0, 0), (1, 1, 0), (2, 2, 0)])
        lasso = Lasso.from_vertices([0, 1, 0], [0, 2, 0])
        assert first_cycle_at_least(lasso, g, Fraction(0)) == Lasso.from_vertices([0], [0, 2, 0])

    def test_simple_lasso_with_good_cycle_is_fixed(self):
        g = fig2()
        lasso = Lasso.from_vertices([0], [0, 2, 3, 4, 5, 6, 0])
        assert first_cycle_at_least(lasso, g, Fraction(0)) == lasso

    def test_no_good_cycle(self):
        with pytest.raises(AssertionError):
            first_cycle_at_least(Lasso.from_vertices([0], [0, 0]), loop(-1), Fraction(0))

    def test_random_output_is_simple(self):
        rng = random.Random(5)
        from strategies import random_lasso
        for _ in range(100):
            g = random_graph(rng.randint(2, 6), 5, 0.5, rng.randrange(10**9))
            lasso = random_lasso(g, rng)
            out = first_cycle_at_least(lasso, g, lasso.cycle_mean(g))
            assert out.is_simple() and out.cycle_mean(g) >= lasso.cycle_mean(g)
