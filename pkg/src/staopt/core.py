"""Points, bounds, objective functions and evaluation accounting.

Points are plain 1-D float arrays. Every call into an objective goes through
:func:`evaluate` or :func:`evaluate_many`, which charge an :class:`EvalCounter`
one unit per point and raise when the budget is spent or the known optimum
has been hit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class BudgetExhausted(Exception):
    """Raised when an evaluation is requested with no budget left.

    ``best`` is the best solution evaluated so far in the run.
    """

    def __init__(self, best: Optional["Solution"] = None):
        super().__init__("function evaluation budget exhausted")
        self.best = best


class OptimumReached(Exception):
    """Raised as soon as an evaluated point meets the counter's stop value."""

    def __init__(self, best: "Solution"):
        super().__init__(f"optimum reached (f={best.fitness!r})")
        self.best = best


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Bounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise DimensionMismatch("lower and upper must be 1-D and of equal length")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, lo: float, hi: float, dim: int) -> "Bounds":
        return cls(np.full(dim, float(lo)), np.full(dim, float(hi)))

    @property
    def dim(self) -> int:
        return self.lower.size

    def contains(self, x) -> bool:
        x = np.asarray(x)
        return bool(np.all((x >= self.lower) & (x <= self.upper)))


@dataclass(frozen=True, eq=False)
class Solution:
    """A point together with its (cached) objective value."""

    point: np.ndarray
    fitness: float

    def __repr__(self):
        return f"Solution(point={np.array2string(self.point, precision=4)}, fitness={self.fitness:.6e})"


@dataclass(frozen=True, eq=False)
class ObjectiveFunction:
    """Bounded scalar objective.

    ``func`` is vectorised: it maps an ``(n, D)`` array to ``n`` values and must
    be deterministic. ``target_value`` is the known global minimum, if any.
    """

    name: str
    dimension: int
    bounds: Bounds
    func: Callable[[np.ndarray], np.ndarray]
    target_value: Optional[float] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.bounds.dim != self.dimension:
            raise DimensionMismatch("bounds do not match the dimension")

    def batch(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(X), dtype=float)

    def __call__(self, x) -> float:
        """Uncounted evaluation of a single point (for tests and reporting)."""
        x = np.asarray(x, dtype=float)
        return float(self.batch(x[None, :])[0])


@dataclass
class EvalCounter:
    """Counts objective calls against a budget and tracks the best point seen.

    ``stop_value``, when set, makes any evaluation with ``f <= stop_value``
    raise :class:`OptimumReached` right after it is counted. ``trace`` holds
    ``(fe, fitness)`` pairs, one per strict improvement of the best seen.
    """

    budget: int
    stop_value: Optional[float] = None
    count: int = 0
    best: Optional[Solution] = None
    trace: list = field(default_factory=list)
    # when set, the point of every trace entry is kept here as well
    path: Optional[list] = None

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")

    @property
    def remaining(self) -> int:
        return self.budget - self.count

    def _record(self, X: np.ndarray, values: np.ndarray, start: int):
        i = int(np.argmin(values))
        v = float(values[i])
        if self.best is None or v < self.best.fitness:
            self.best = Solution(X[i].copy(), v)
            self.trace.append((start + i + 1, v))
            if self.path is not None:
                self.path.append(self.best.point)


def _check_dim(f: ObjectiveFunction, X: np.ndarray):
    if X.shape[-1] != f.dimension:
        raise DimensionMismatch(f"expected dimension {f.dimension}, got {X.shape[-1]}")


def evaluate_many(f: ObjectiveFunction, X: np.ndarray, counter: EvalCounter) -> np.ndarray:
    """Evaluate the rows of ``X`` in order, charging one FE each.

    If the budget runs out part-way, the rows that fit are still evaluated
    and recorded before :class:`BudgetExhausted` is raised. Rows after the
    first one meeting ``counter.stop_value`` are not evaluated.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatch("evaluate_many expects a 2-D array of points")
    _check_dim(f, X)
    n = X.shape[0]
    if n == 0:
        return np.empty(0)
    if counter.remaining <= 0:
        raise BudgetExhausted(counter.best)
    m = min(n, counter.remaining)
    values = f.batch(X[:m])
    hit = False
    if counter.stop_value is not None:
        idx = np.flatnonzero(values <= counter.stop_value)
        if idx.size:
            m = int(idx[0]) + 1
            values = values[:m]
            hit = True
    start = counter.count
    counter.count += m
    counter._record(X, values, start)
    if hit:
        raise OptimumReached(counter.best)
    if m < n:
        raise BudgetExhausted(counter.best)
    return values


def evaluate(f: ObjectiveFunction, p, counter: EvalCounter) -> float:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise DimensionMismatch("evaluate expects a single point")
    return float(evaluate_many(f, p[None, :], counter)[0])


def evaluate_solution(f: ObjectiveFunction, p, counter: EvalCounter) -> Solution:
    p = np.asarray(p, dtype=float)
    return Solution(p, evaluate(f, p, counter))


def clamp(p, bounds: Bounds) -> np.ndarray:
    """Project a point (or the rows of an array) onto the box."""
    return np.clip(np.asarray(p, dtype=float), bounds.lower, bounds.upper)


def make_rng(seed: int) -> np.random.Generator:
    """Per-run random stream; one seed fully determines a run."""
    return np.random.default_rng(seed)
