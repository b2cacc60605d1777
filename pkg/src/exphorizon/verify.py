"""Solver-versus-oracle harness over a seeded random corpus.

Each property is checked on every instance; failures are collected with
enough data (graph text, horizon, both values) to replay them.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .adversarial import adversarial_value, best_paths, exists_positive_path, in_value_space, path_constraint, shift_weights
from .core import utility_sequence
from .fixed_horizon import maxplus_power_value, value_iteration
from .formats import format_graph
from .instances import random_graph
from .oracle import bidirac_value, brute_force_adversarial_value, hull_value, lasso_value, enumerate_simple_lassos
from .specified import StoppingDistribution, specified_value

MAX_VERIFY_VERTICES = 8
WORKERS_ENV = "EXPHORIZON_WORKERS"
HORIZONS = (Fraction(3, 2), Fraction(4), Fraction(17, 3))

DEFAULT_SOLVERS: dict[str, Callable] = {
    "adversarial": adversarial_value,
    "decide": exists_positive_path,
    "bellman": value_iteration,
    "maxplus": maxplus_power_value,
    "specified": specified_value,
}

PROPERTIES = (
    "adversarial_exact", "decision", "witness", "value_space", "shift_equivariance",
    "fixed_methods", "dirac_consistency", "hull_crosscheck", "bidirac_bound", "constraint_integrity",
)


class VerifyBudgetError(ValueError):
    pass


@dataclass
class Counterexample:
    prop: str
    graph_text: str
    horizon: str
    solver: str
    oracle: str

    def dump(self) -> str:
        return (f"[{self.prop}] T={self.horizon} solver={self.solver} oracle={self.oracle}\n"
                + self.graph_text)


@dataclass
class VerifyReport:
    passed: dict[str, int] = field(default_factory=lambda: {p: 0 for p in PROPERTIES})
    failed: dict[str, int] = field(default_factory=lambda: {p: 0 for p in PROPERTIES})
    counterexamples: list[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def merge(self, other: "VerifyReport") -> None:
        for p in PROPERTIES:
            self.passed[p] += other.passed[p]
            self.failed[p] += other.failed[p]
        self.counterexamples.extend(other.counterexamples)

    def summary(self) -> str:
        lines = [f"{p:22s} pass {self.passed[p]:5d}  fail {self.failed[p]:5d}" for p in PROPERTIES]
        return "\n".join(lines)


def _instance(seed: int, max_vertices: int):
    rng = random.Random(seed)
    n = rng.randint(1, max_vertices)
    graph = random_graph(n, 5, rng.choice((0.3, 0.5, 0.8)), rng.randrange(2**32))
    horizon = rng.choice(HORIZONS)
    fixed_t = rng.randint(1, 64)
    eta = rng.choice((Fraction(1, 3), Fraction(-1, 3), Fraction(2), Fraction(-2)))
    return graph, horizon, fixed_t, eta


def check_instance(seed: int, max_vertices: int, solvers: dict[str, Callable] | None = None) -> VerifyReport:
    solvers = {**DEFAULT_SOLVERS, **(solvers or {})}
    graph, horizon, fixed_t, eta = _instance(seed, max_vertices)
    report = VerifyReport()
    text = format_graph(graph, comments=[f"seed {seed}"])

    def record(prop: str, ok: bool, t, got, want) -> None:
        if ok:
            report.passed[prop] += 1
        else:
            report.failed[prop] += 1
            report.counterexamples.append(Counterexample(prop, text, str(t), str(got), str(want)))

    value, plan = solvers["adversarial"](graph, 0, horizon)
    oracle_value, _ = brute_force_adversarial_value(graph, 0, horizon)
    record("adversarial_exact", value == oracle_value, horizon, value, oracle_value)
    answer, _ = solvers["decide"](graph, 0, horizon)
    record("decision", answer == (oracle_value >= 0), horizon, answer, oracle_value >= 0)
    plan_value = lasso_value(plan, graph, horizon).value
    record("witness", plan.is_simple() and plan_value == value, horizon, f"{plan} -> {plan_value}", value)
    record("value_space", in_value_space(value, graph, horizon), horizon, value, "in value space")
    shifted_value, _ = solvers["adversarial"](shift_weights(graph, eta), 0, horizon)
    record("shift_equivariance", shifted_value == value + eta * horizon, horizon, shifted_value, value + eta * horizon)

    bellman, path = solvers["bellman"](graph, 0, fixed_t)
    maxplus = solvers["maxplus"](graph, 0, fixed_t)
    record("fixed_methods", bellman == maxplus and path.total(graph) == bellman, fixed_t, maxplus, bellman)
    spec_value, _ = solvers["specified"](graph, 0, StoppingDistribution.dirac(fixed_t))
    record("dirac_consistency", spec_value == bellman, fixed_t, spec_value, bellman)

    for lasso in enumerate_simple_lassos(graph, 0):
        lv = lasso_value(lasso, graph, horizon).value
        hv = hull_value(lasso, graph, horizon)
        record("hull_crosscheck", lv == hv, horizon, f"{lasso} -> {lv}", hv)
        bd = bidirac_value(lasso, graph, horizon, int(horizon) + 40)
        record("bidirac_bound", bd >= lv, horizon, bd, lv)

    table = best_paths(graph, 0, 0, Fraction(0), path_constraint([0], horizon), horizon)
    for (t, v), pairs in table.items():
        for pair in pairs:
            u = utility_sequence(pair.witness, graph)
            ok = (pair.witness.end == v and len(pair.witness) == t and u[-1] == pair.utility
                  and path_constraint(u, horizon) == pair.constraint)
            record("constraint_integrity", ok, horizon, pair, "recomputed from witness")
    return report


def _check_args(args):
    return check_instance(*args)


def run_verify(corpus_size: int, max_vertices: int, seed: int,
               solvers: dict[str, Callable] | None = None, workers: int | None = None) -> VerifyReport:
    """Check every property on ``corpus_size`` random instances with up to ``max_vertices`` vertices.

    The worker count comes from ``EXPHORIZON_WORKERS`` unless given; injected
    solvers always run in-process.
    """
    if max_vertices > MAX_VERIFY_VERTICES:
        raise VerifyBudgetError(f"max vertices {max_vertices} exceeds the oracle budget of {MAX_VERIFY_VERTICES}")
    if max_vertices < 1 or corpus_size < 0:
        raise ValueError("need max_vertices >= 1 and corpus_size >= 0")
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    rng = random.Random(seed)
    seeds = [rng.randrange(2**32) for _ in range(corpus_size)]
    report = VerifyReport()
    if workers > 1 and solvers is None:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_check_args, [(s, max_vertices) for s in seeds]))
    else:
        parts = [check_instance(s, max_vertices, solvers) for s in seeds]
    for part in parts:
        report.merge(part)
    return report
