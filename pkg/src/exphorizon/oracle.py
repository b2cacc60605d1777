"""Reference evaluators for the adversarial value, independent of the solver.

The worst-case expected utility of one lasso at expected horizon ``T`` is the
height at ``T`` of the lower convex hull of the points ``(t, u[t])``. Two
routes compute it: a scan over two-point distributions
(:func:`lasso_value`) and an explicit hull (:func:`hull_value`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .core import Lasso, WeightedGraph, as_rational, first_cycle_at_least, iter_simple_lassos, lasso_utilities

DEFAULT_LASSO_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LassoValue:
    """``value = u[t1] + (T - t1) * nu``.

    ``nu`` is the smallest slope from ``(t1, u[t1])`` to a point at or right
    of ``T`` (right of ``T`` when ``t1 = T``), and the line of slope ``nu``
    through ``(T, value)`` lies below every utility. ``limit_used`` means the
    slope is only approached along the cycle, and then ``attained`` is False
    (no distribution reaches the infimum).
    """

    value: Fraction
    attained: bool
    t1: int
    nu: Fraction
    limit_used: bool


def _right_slope(u, t1: int, t2_from: int, t2_to: int, mean: Fraction) -> tuple[Fraction, bool]:
    best = None
    for t2 in range(t2_from, t2_to + 1):
        s = (u[t2] - u[t1]) / (t2 - t1)
        if best is None or s < best:
            best = s
    if best is None or mean < best:
        return mean, True
    return best, False


def lasso_value(lasso: Lasso, graph: WeightedGraph, horizon) -> LassoValue:
    """Infimum of ``E[u[tau]]`` over stopping distributions with ``E[tau] = T``.

    Two-point distributions suffice. For a left point ``t1`` the slopes to the
    copies of one cycle position converge monotonically to the cycle mean, so
    the right point only needs one period past ``max(ceil(T), |stem|)`` plus
    the limit. Hull vertices lie before ``|stem| + |cycle|``, which bounds
    ``t1``.
    """
    horizon = as_rational(horizon)
    if horizon < 0:
        raise ValueError("expected horizon must be nonnegative")
    a, c = len(lasso.stem), len(lasso.cycle)
    mean = lasso.cycle_mean(graph)
    t2_lo = math.ceil(horizon)
    t2_hi = max(t2_lo + 1, a) + c
    u = lasso_utilities(lasso, graph, t2_hi)
    best = None
    for t1 in range(0, min(math.floor(horizon), a + c) + 1):
        nu, limit = _right_slope(u, t1, max(t2_lo, t1 + 1), t2_hi, mean)
        value = u[t1] + (horizon - t1) * nu
        if t1 == horizon:
            limit = False  # the Dirac at T needs no right point
        # among minimizers the largest nu is a slope of the hull at T
        if best is None or (value, -nu) < (best.value, -best.nu):
            best = LassoValue(value, not limit, t1, nu, limit)
    return best


def bidirac_value(lasso: Lasso, graph: WeightedGraph, horizon, t2_cap: int) -> Fraction:
    """Minimum over two-point distributions with right point ``<= t2_cap``.

    An upper bound on :func:`lasso_value` that meets it once ``t2_cap`` covers
    the optimal right point.
    """
    horizon = as_rational(horizon)
    lo, hi = math.floor(horizon), math.ceil(horizon)
    if t2_cap < hi:
        raise ValueError("t2_cap must reach the horizon")
    u = lasso_utilities(lasso, graph, t2_cap)
    best = u[lo] if lo == horizon else None
    for t1 in range(0, lo + 1):
        for t2 in range(max(hi, t1 + 1), t2_cap + 1):
            p2 = (horizon - t1) / (t2 - t1)
            v = (1 - p2) * u[t1] + p2 * u[t2]
            if best is None or v < best:
                best = v
    return best


def distribution_value(lasso: Lasso, graph: WeightedGraph, horizon, dist) -> Fraction:
    """``E[u[tau]]`` along the lasso for an explicit distribution with mean ``T``."""
    pairs = list(dist.items())
    mass = sum((p for _, p in pairs), Fraction(0))
    mean = sum((p * t for t, p in pairs), Fraction(0))
    if mass != 1 or mean != as_rational(horizon):
        raise ValueError(f"distribution has mass {mass} and mean {mean}, expected 1 and {horizon}")
    u = lasso_utilities(lasso, graph, max(t for t, _ in pairs))
    return sum((p * u[t] for t, p in pairs), Fraction(0))


def _lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it is strictly below the chord hull[-2] -> p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def hull_value(lasso: Lasso, graph: WeightedGraph, horizon) -> Fraction:
    """Lower convex hull of ``(t, u[t])`` evaluated at ``T``.

    Points past the stem repeat with drift ``(|cycle|, cycle sum)``, so the
    hull of the infinite set is the hull of a finite window plus rays of
    slope equal to the cycle mean.
    """
    horizon = as_rational(horizon)
    a, c = len(lasso.stem), len(lasso.cycle)
    mean = lasso.cycle_mean(graph)
    end = max(math.ceil(horizon), a + c) + c
    u = lasso_utilities(lasso, graph, end)
    hull = _lower_hull([(t, u[t]) for t in range(end + 1)])
    candidates = [u[t] + (horizon - t) * mean for t in range(0, math.floor(horizon) + 1)]
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= horizon <= x2:
            candidates.append(y1 + (y2 - y1) * (horizon - x1) / (x2 - x1))
    if len(hull) == 1 and hull[0][0] == horizon:
        candidates.append(hull[0][1])
    return min(candidates)


def enumerate_simple_lassos(graph: WeightedGraph, v0: int, budget: int = DEFAULT_LASSO_BUDGET) -> Iterator[Lasso]:
    for count, lasso in enumerate(iter_simple_lassos(graph, v0), start=1):
        if count > budget:
            raise BudgetExceeded(f"more than {budget} simple lassos from vertex {v0}")
        yield lasso


def brute_force_adversarial_value(graph: WeightedGraph, v0: int, horizon,
                                  budget: int = DEFAULT_LASSO_BUDGET) -> tuple[Fraction, Lasso]:
    """Best :func:`lasso_value` over all simple lassos; ties keep the lexicographically first."""
    best_value, best_lasso = None, None
    for lasso in enumerate_simple_lassos(graph, v0, budget):
        v = lasso_value(lasso, graph, horizon).value
        if best_value is None or v > best_value:
            best_value, best_lasso = v, lasso
    return best_value, best_lasso


def reduce_to_simple_lasso(lasso: Lasso, graph: WeightedGraph, horizon) -> Lasso:
    """A simple lasso whose value is at least that of ``lasso``.

    The utilities lie above the line of slope ``nu`` through the value at
    ``T``; cutting cycles with mean below ``nu`` and closing the first cycle
    with mean at least ``nu`` keeps them above it.
    """
    lv = lasso_value(lasso, graph, horizon)
    return first_cycle_at_least(lasso, graph, lv.nu)
