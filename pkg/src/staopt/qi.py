"""Quadratic-interpolation exploitation step."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Bounds, EvalCounter, ObjectiveFunction, Solution, clamp, evaluate
from .history import HistorySet

SINGULAR_TOL = 1e-14


class MissingTarget(ValueError):
    pass


@dataclass(frozen=True)
class QiAgents:
    a: Solution
    b: Solution
    best: Solution


def qi_point(agents: QiAgents, bounds: Bounds, tol: float = SINGULAR_TOL) -> np.ndarray:
    """Per-coordinate vertex of the parabola through the three agents.

    Coordinates whose denominator is below ``tol`` in magnitude (or whose
    result is not finite) keep the best agent's value.
    """
    xa, xb, xs = agents.a.point, agents.b.point, agents.best.point
    fa, fb, fs = agents.a.fitness, agents.b.fitness, agents.best.fitness
    with np.errstate(all="ignore"):
        num = (xs**2 - xb**2) * fa + (xa**2 - xs**2) * fb + (xb**2 - xa**2) * fs
        t1, t2, t3 = (xs - xb) * fa, (xa - xs) * fb, (xb - xa) * fs
        den = t1 + t2 + t3
        x = 0.5 * num / den
        scale = np.abs(t1) + np.abs(t2) + np.abs(t3)
    bad = ~(np.abs(den) > tol * scale) | ~np.isfinite(x)
    x = np.where(bad, xs, x)
    return clamp(x, bounds)


def average_accuracy(h: HistorySet, target) -> float:
    """Distance between the mean fitness in ``h`` and the known optimum value."""
    if target is None:
        raise MissingTarget("average accuracy needs a known optimum value")
    return abs(float(np.mean(h.fitnesses)) - target)


def draw_agents(h: HistorySet, best: Solution, rng) -> QiAgents | None:
    """Two distinct entries of ``h`` whose points differ from ``best``.

    Returns None when ``h`` holds fewer than two such entries.
    """
    pool = [e.solution for e in h.entries if not np.array_equal(e.solution.point, best.point)]
    if len(pool) < 2:
        return None
    i, j = rng.choice(len(pool), size=2, replace=False)
    return QiAgents(pool[i], pool[j], best)


def qi_step(
    h: HistorySet,
    best: Solution,
    f: ObjectiveFunction,
    rng,
    counter: EvalCounter,
    bounds: Bounds | None = None,
) -> Solution:
    """One greedy QI move using two random entries of ``h`` and the incumbent."""
    bounds = bounds or f.bounds
    agents = draw_agents(h, best, rng)
    if agents is None:
        return best
    x = qi_point(agents, bounds)
    if np.array_equal(x, best.point):
        return best
    fx = evaluate(f, x, counter)
    if fx < best.fitness:
        return Solution(x, fx)
    return best
