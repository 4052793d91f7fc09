"""Parameter-optimal STA: factor selection over a fixed grid and the main loop."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import EvalCounter, ObjectiveFunction, Solution, clamp, evaluate_many
from .operators import DIRECTIONS, OperatorKind, candidates, translation_candidates

DEFAULT_OMEGA = (1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)

# expansion first (global), then rotation (local), then axesion (per-axis)
PHASE_ORDER = (OperatorKind.EXPANSION, OperatorKind.ROTATION, OperatorKind.AXESION)

_FACTOR_ATTR = {
    OperatorKind.ROTATION: "alpha",
    OperatorKind.EXPANSION: "gamma",
    OperatorKind.AXESION: "delta",
}

ImproveHook = Callable[[Solution], Optional[Solution]]


@dataclass
class ParameterState:
    omega: tuple = DEFAULT_OMEGA
    tp: int = 10
    se: int = 50
    beta: float = 1.0
    alpha: float = 1.0
    gamma: float = 1.0
    delta: float = 1.0

    def __post_init__(self):
        omega = tuple(float(v) for v in self.omega)
        if not omega or any(v <= 0 for v in omega):
            raise ValueError("omega values must be positive")
        if any(a <= b for a, b in zip(omega, omega[1:])):
            raise ValueError("omega must be strictly decreasing")
        self.omega = omega
        if self.tp < 1 or self.se < 1:
            raise ValueError("tp and se must be at least 1")
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    def factor(self, kind: OperatorKind) -> float:
        return getattr(self, _FACTOR_ATTR[kind])

    def set_factor(self, kind: OperatorKind, value: float):
        setattr(self, _FACTOR_ATTR[kind], value)


def _notify(best: Solution, on_improve: Optional[ImproveHook]) -> Solution:
    if on_improve is None:
        return best
    adopted = on_improve(best)
    if adopted is not None and adopted.fitness < best.fitness:
        return adopted
    return best


def select_parameter(
    f: ObjectiveFunction,
    best: Solution,
    kind: OperatorKind,
    ps: ParameterState,
    rng,
    counter: EvalCounter,
) -> tuple[float, Solution]:
    """Pick the factor in ``ps.omega`` giving the lowest objective value.

    ``se`` directions are drawn once and scaled by every factor in turn, so
    ``len(omega) * se`` points are evaluated, factor-major. Ties go to the
    earliest (largest) factor. The best grid point replaces ``best`` only if
    strictly better.
    """
    if kind not in _FACTOR_ATTR:
        raise ValueError(f"no factor selection for {kind}")
    d = DIRECTIONS[kind](best.point, ps.se, rng)
    omega = np.asarray(ps.omega)
    grid = best.point[None, None, :] + omega[:, None, None] * d[None, :, :]
    grid = clamp(grid.reshape(-1, best.point.size), f.bounds)
    values = evaluate_many(f, grid, counter)
    i = int(np.argmin(values))
    chosen = float(omega[i // ps.se])
    ps.set_factor(kind, chosen)
    if values[i] < best.fitness:
        best = Solution(grid[i], float(values[i]))
    return chosen, best


def _best_of(X: np.ndarray, values: np.ndarray, best: Solution) -> Optional[Solution]:
    i = int(np.argmin(values))
    if values[i] < best.fitness:
        return Solution(X[i], float(values[i]))
    return None


def operator_phase(
    f: ObjectiveFunction,
    best: Solution,
    kind: OperatorKind,
    ps: ParameterState,
    rng,
    counter: EvalCounter,
    on_improve: Optional[ImproveHook] = None,
) -> Solution:
    """Select the factor for ``kind``, then apply the operator ``tp`` times.

    After every strict improvement by the operator a translation search
    along the improving step is tried. ``on_improve`` is called after each
    strict improvement; if it hands back a strictly better solution, that
    one becomes the incumbent.
    """
    start = best
    _, best = select_parameter(f, best, kind, ps, rng, counter)
    if best is not start:
        best = _notify(best, on_improve)
    for _ in range(ps.tp):
        X = clamp(candidates(kind, best, ps.factor(kind), ps.se, rng), f.bounds)
        new = _best_of(X, evaluate_many(f, X, counter), best)
        if new is None:
            continue
        prev, best = best, _notify(new, on_improve)
        if np.array_equal(best.point, prev.point):
            continue
        T = clamp(translation_candidates(best, prev, ps.beta, ps.se, rng), f.bounds)
        moved = _best_of(T, evaluate_many(f, T, counter), best)
        if moved is not None:
            best = _notify(moved, on_improve)
    return best


def posta_iteration(
    f: ObjectiveFunction,
    best: Solution,
    ps: ParameterState,
    rng,
    counter: EvalCounter,
    on_improve: Optional[ImproveHook] = None,
) -> Solution:
    for kind in PHASE_ORDER:
        best = operator_phase(f, best, kind, ps, rng, counter, on_improve)
    return best
