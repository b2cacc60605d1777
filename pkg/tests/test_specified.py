from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from exphorizon.core import Lasso, WeightedGraph, utility_sequence
from exphorizon.fixed_horizon import NEG_INF, MaxPlusMatrix, value_iteration
from exphorizon.instances import fig1, fig2, random_graph
from exphorizon.specified import (DistributionError, StoppingDistribution, build_layered_graph, expected_utility,
                                  layered_hop_sum, specified_value,
                                  telescoped_utility)

from strategies import all_paths, graphs

F = Fraction


@st.composite
def distributions(draw, max_time=8, max_support=4):
    times = sorted(draw(st.sets(st.integers(0, max_time), min_size=1, max_size=max_support)))
    weights = [draw(st.integers(1, 6)) for _ in times]
    total = sum(weights)
    return StoppingDistribution(tuple(times), tuple(F(w, total) for w in weights))


class TestDistribution:
    def test_validation(self):
        with pytest.raises(DistributionError):
            StoppingDistribution((2, 1), (F(1, 2), F(1, 2)))
        with pytest.raises(DistributionError):
            StoppingDistribution((1,), (F(0),))
        with pytest.raises(DistributionError):
            StoppingDistribution((1, 2), (F(2, 3), F(2, 3)))

    def test_expected_time(self):
        d = StoppingDistribution.from_pairs([(3, F(1, 2)), (1, F(1, 2))])
        assert d.times == (1, 3) and d.expected_time == 2


class TestExpectedUtility:
    def test_two_points(self):
        d = StoppingDistribution((1, 3), (F(1, 2), F(1, 2)))
        assert expected_utility([0, 1, 2, 3], d) == 2

    @pytest.mark.parametrize("t", [0, 2, 3])
    def test_dirac(self, t):
        assert expected_utility([0, 5, -1, 7], StoppingDistribution.dirac(t)) == [0, 5, -1, 7][t]

    def test_sub_distribution_normalized(self):
        assert expected_utility([0, 4, 6], StoppingDistribution((2,), (F(1, 2),))) == 6

    def test_support_past_sequence(self):
        with pytest.raises(DistributionError):
            expected_utility([0, 1], StoppingDistribution.dirac(2))

    def test_lasso_needs_graph(self):
        lasso = Lasso.from_vertices([0], [0, 0])
        with pytest.raises(TypeError):
            expected_utility(lasso, StoppingDistribution.dirac(2))
        assert expected_utility(lasso, StoppingDistribution.dirac(2), WeightedGraph(1, [(0, 0, 3)])) == 6


class TestLayeredGraph:
    def test_dirac_single_hop(self):
        g = fig1(3)
        layered = build_layered_graph(g, StoppingDistribution.dirac(7))
        assert layered.hops == (7,) and layered.tail_mass == (1,)
        from exphorizon.fixed_horizon import maxplus_power
        assert layered.weights[0] == maxplus_power(MaxPlusMatrix.from_graph(g), 7).rows

    def test_two_hops_half_mass(self):
        g = WeightedGraph(2, [(0, 0, 1), (0, 1, 3), (1, 0, -2)])
        layered = build_layered_graph(g, StoppingDistribution((1, 2), (F(1, 2), F(1, 2))))
        assert layered.hops == (1, 1)
        assert layered.weights[0] == ((1, 3), (-2, NEG_INF))
        assert layered.weights[1] == ((F(1, 2), F(3, 2)), (-1, NEG_INF))

    def test_zero_first_hop_is_identity(self):
        layered = build_layered_graph(fig1(3), StoppingDistribution((0, 2), (F(1, 2), F(1, 2))))
        assert layered.hops == (0, 2)
        assert layered.weights[0][1] == (NEG_INF, 0, NEG_INF, NEG_INF)


class TestSpecifiedValue:
    def test_fig2_dirac(self):
        assert specified_value(fig2(), 0, StoppingDistribution.dirac(32))[0] == 1

    @pytest.mark.parametrize("c", [-2, 0, 3])
    def test_self_loop(self, c):
        d = StoppingDistribution((1, 2, 6), (F(1, 4), F(1, 4), F(1, 2)))
        assert specified_value(WeightedGraph(1, [(0, 0, c)]), 0, d)[0] == c * d.expected_time

    @pytest.mark.parametrize("seed", range(5))
    def test_random_three_vertices_against_enumeration(self, seed):
        g = random_graph(3, 5, 0.6, seed)
        d = StoppingDistribution((1, 2, 4), (F(1, 3), F(1, 3), F(1, 3)))
        best = max(expected_utility(utility_sequence(p, g), d) for p in all_paths(g, 0, 4))
        value, witness = specified_value(g, 0, d)
        assert value == best and expected_utility(utility_sequence(witness, g), d) == best

    def test_requires_mass_one(self):
        with pytest.raises(DistributionError):
            specified_value(fig1(3), 0, StoppingDistribution((2,), (F(1, 2),)))

    def test_witness_bound(self):
        value, witness = specified_value(fig1(3), 0, StoppingDistribution.dirac(49), witness_bound=10)
        assert value == 1 and witness is None

    @given(graphs(max_vertices=6), st.integers(0, 30))
    def test_dirac_consistency(self, g, horizon):
        assert specified_value(g, 0, StoppingDistribution.dirac(horizon))[0] == value_iteration(g, 0, horizon)[0]

    @given(graphs(max_vertices=5), distributions(), st.sampled_from([F(-2), F(1, 3), F(5, 2)]))
    def test_shift_covariance(self, g, d, eta):
        shifted = WeightedGraph(g.vertex_count, [(s, t, w + eta) for s, t, w in g.edges()])
        assert specified_value(shifted, 0, d)[0] == specified_value(g, 0, d)[0] + eta * d.expected_time

    @given(graphs(max_vertices=5), distributions())
    def test_witness_and_telescoping(self, g, d):
        value, witness = specified_value(g, 0, d)
        u = utility_sequence(witness, g)
        assert len(witness) == d.max_time
        assert expected_utility(u, d) == value == telescoped_utility(u, d)
        layer_vertices = [witness.vertices[t] for t in (0,) + d.times]
        assert layered_hop_sum(build_layered_graph(g, d), layer_vertices) == value
