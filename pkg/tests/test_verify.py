from fractions import Fraction

import pytest

from exphorizon.adversarial import adversarial_value
from exphorizon.core import WeightedGraph
from exphorizon.verify import PROPERTIES, VerifyBudgetError, run_verify


def test_small_corpus_passes():
    report = run_verify(20, 4, 7)
    assert report.ok
    assert all(report.passed[p] > 0 for p in PROPERTIES)


def test_injected_off_by_one_is_caught():
    def buggy(graph, v0, horizon):
        s, t, w = graph.edges()[0]
        edges = [(a, b, c + (1 if (a, b) == (s, t) else 0)) for a, b, c in graph.edges()]
        return adversarial_value(WeightedGraph(graph.vertex_count, edges), v0, horizon)

    report = run_verify(10, 3, 1, solvers={"adversarial": buggy})
    assert not report.ok and report.failed["adversarial_exact"] > 0
    dump = report.counterexamples[0].dump()
    assert "vertices" in dump and "T=" in dump


def test_budget_refused():
    with pytest.raises(VerifyBudgetError):
        run_verify(1, 9, 0)


def test_parallel_matches_sequential():
    a, b = run_verify(6, 3, 2, workers=1), run_verify(6, 3, 2, workers=2)
    assert a.passed == b.passed and a.ok and b.ok
