"""Nelder-Mead simplex search with box projection."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    Bounds,
    BudgetExhausted,
    EvalCounter,
    ObjectiveFunction,
    Solution,
    clamp,
    evaluate,
    evaluate_many,
)

DIAMETER_TOL = 1e-12


@dataclass(frozen=True)
class NmCoefficients:
    eta: float = 1.0  # reflection
    lam: float = 2.0  # expansion
    mu: float = 0.5  # contraction
    nu: float = 0.5  # shrink

    def __post_init__(self):
        if not (self.eta > 0 and self.lam > 1 and 0 < self.mu < 1 and 0 < self.nu < 1):
            raise ValueError(f"invalid Nelder-Mead coefficients {self}")


@dataclass
class Simplex:
    vertices: list
    # name of the move made by the last nm_iterate call
    step: str = ""

    def __post_init__(self):
        dims = {v.point.size for v in self.vertices}
        if len(dims) != 1 or len(self.vertices) != dims.pop() + 1:
            raise ValueError("a simplex needs D+1 vertices of dimension D")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def sorted(self) -> list:
        return sorted(self.vertices, key=lambda v: v.fitness)

    @property
    def best(self) -> Solution:
        return min(self.vertices, key=lambda v: v.fitness)

    def diameter(self) -> float:
        P = np.array([v.point for v in self.vertices])
        return float(np.max(np.abs(P[:, None, :] - P[None, :, :])))


def init_simplex(x0, f: ObjectiveFunction, counter: EvalCounter) -> Simplex:
    """Axis-aligned start simplex: step 0.05 along nonzero coordinates, 0.00025 along zero ones.

    ``x0`` may be an already evaluated :class:`Solution`, in which case it is
    not evaluated again. A step that would leave the box is taken in the
    opposite direction instead.
    """
    if isinstance(x0, Solution):
        first = x0
    else:
        x = np.asarray(x0, dtype=float)
        first = Solution(x, evaluate(f, x, counter))
    x = first.point
    D = x.size
    tau = np.where(x != 0.0, 0.05, 0.00025)
    P = np.repeat(x[None, :], D, axis=0)
    idx = np.arange(D)
    up = x + tau
    P[idx, idx] = np.where(up <= f.bounds.upper, up, x - tau)
    P = clamp(P, f.bounds)
    values = evaluate_many(f, P, counter)
    return Simplex([first] + [Solution(P[i], float(values[i])) for i in range(D)])


def _shrink(v: list, f, coeffs, counter) -> list:
    x1 = v[0].point
    P = np.array([x1 + coeffs.nu * (w.point - x1) for w in v[1:]])
    P = clamp(P, f.bounds)
    values = evaluate_many(f, P, counter)
    return [v[0]] + [Solution(P[i], float(values[i])) for i in range(len(P))]


def nm_iterate(
    s: Simplex,
    f: ObjectiveFunction,
    coeffs: NmCoefficients,
    counter: EvalCounter,
    bounds: Optional[Bounds] = None,
) -> Simplex:
    """One Nelder-Mead pass: sort, reflect, then expand / contract / shrink."""
    bounds = bounds or f.bounds
    v = s.sorted()
    best, nxt, worst = v[0], v[-2], v[-1]
    xc = np.mean([w.point for w in v[:-1]], axis=0)

    def trial(x):
        x = clamp(x, bounds)
        return Solution(x, evaluate(f, x, counter))

    r = trial(xc + coeffs.eta * (xc - worst.point))
    if r.fitness < best.fitness:
        e = trial(xc + coeffs.lam * (r.point - xc))
        if e.fitness < r.fitness:
            return Simplex(v[:-1] + [e], "expand")
        return Simplex(v[:-1] + [r], "reflect")
    if r.fitness < nxt.fitness:
        return Simplex(v[:-1] + [r], "reflect")
    if r.fitness < worst.fitness:
        oc = trial(xc + coeffs.mu * (r.point - xc))
        if oc.fitness <= r.fitness:
            return Simplex(v[:-1] + [oc], "outside")
    else:
        ic = trial(xc - coeffs.mu * (r.point - xc))
        if ic.fitness < worst.fitness:
            return Simplex(v[:-1] + [ic], "inside")
    return Simplex(_shrink(v, f, coeffs, counter), "shrink")


def nm_search(
    x0,
    f: ObjectiveFunction,
    coeffs: NmCoefficients,
    counter: EvalCounter,
    max_iters: int,
    bounds: Optional[Bounds] = None,
) -> Solution:
    """Plain Nelder-Mead from ``x0``; stops on iterations, budget or a collapsed simplex."""
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    try:
        s = init_simplex(x0, f, counter)
    except BudgetExhausted as exc:
        if exc.best is None:
            raise
        return exc.best
    try:
        for _ in range(max_iters):
            if s.diameter() < DIAMETER_TOL:
                break
            s = nm_iterate(s, f, coeffs, counter, bounds)
    except BudgetExhausted as exc:
        if exc.best is not None and exc.best.fitness < s.best.fitness:
            return exc.best
    return s.best
