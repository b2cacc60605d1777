import pytest

from exphorizon.instances import fig1, fig2, random_graph


def test_fig1_weights():
    g = fig1(3)
    assert g.vertex_count == 4
    assert sorted(g.edges()) == [(0, 1, -1), (0, 3, 1), (1, 2, 0), (2, 0, 1), (3, 3, -1)]


def test_fig1_needs_ring():
    with pytest.raises(ValueError):
        fig1(1)


def test_fig2_loops():
    g = fig2()
    assert g.vertex_count == 2 + 5 + 9 + 14
    assert g.weight(0, 1) == 1 and g.weight(1, 1) == -1
    # walk each loop back to 0
    lengths = []
    for first in g.successors(0):
        if first == 1:
            continue
        v, steps = first, 1
        while v != 0:
            (v,) = g.successors(v)
            steps += 1
        lengths.append(steps)
    assert sorted(lengths) == [6, 10, 15]


@pytest.mark.parametrize("lengths", [(6, 10), (6, 6, 15), (1, 10, 15), (6, 10, 14)])
def test_fig2_rejects(lengths):
    with pytest.raises(ValueError):
        fig2(lengths)


def test_random_reproducible_and_total():
    a, b = random_graph(7, 4, 0.2, 9), random_graph(7, 4, 0.2, 9)
    assert a == b and a != random_graph(7, 4, 0.2, 10)
    assert all(a.successors(v) for v in range(7))
    assert all(-4 <= w <= 4 for _, _, w in a.edges())
