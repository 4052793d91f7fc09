"""State transformation operators.

Each ``*_directions`` function draws ``se`` search directions around a
point; the matching ``*_candidates`` function scales them by the operator
factor and adds them to the point. Candidates are returned unclamped, the
caller projects them onto the box before evaluation.
"""
from __future__ import annotations

from enum import Enum

import numpy as np

from .core import Solution


class OperatorKind(Enum):
    ROTATION = "rotation"
    TRANSLATION = "translation"
    EXPANSION = "expansion"
    AXESION = "axesion"


class DegenerateDirection(ValueError):
    pass


def _pt(s) -> np.ndarray:
    return s.point if isinstance(s, Solution) else np.asarray(s, dtype=float)


def _unit(v: np.ndarray):
    """``v / |v|`` computed without underflow in the norm; None for the zero vector."""
    m = np.max(np.abs(v))
    if m == 0.0:
        return None
    v = v / m
    return v / np.linalg.norm(v)


def rotation_directions(x: np.ndarray, se: int, rng) -> np.ndarray:
    """``R x / (n |x|)`` with a fresh uniform [-1, 1] matrix ``R`` per row.

    Every direction has norm at most 1. At the origin there is no direction
    to rotate, so zeros are returned.
    """
    n = x.size
    u = _unit(x)
    if u is None:
        return np.zeros((se, n))
    R = rng.uniform(-1.0, 1.0, size=(se, n, n))
    return (R @ u) / n


def expansion_directions(x: np.ndarray, se: int, rng) -> np.ndarray:
    g = rng.standard_normal(size=(se, x.size))
    return g * x


def axesion_directions(x: np.ndarray, se: int, rng) -> np.ndarray:
    n = x.size
    axes = rng.integers(0, n, size=se)
    g = rng.standard_normal(size=se)
    d = np.zeros((se, n))
    d[np.arange(se), axes] = g * x[axes]
    return d


def translation_directions(best: np.ndarray, prev: np.ndarray, se: int, rng) -> np.ndarray:
    u = _unit(best - prev)
    if u is None:
        raise DegenerateDirection("translation needs two distinct points")
    t = rng.uniform(0.0, 1.0, size=se)
    return t[:, None] * u


DIRECTIONS = {
    OperatorKind.ROTATION: rotation_directions,
    OperatorKind.EXPANSION: expansion_directions,
    OperatorKind.AXESION: axesion_directions,
}


def rotation_candidates(best, alpha: float, se: int, rng) -> np.ndarray:
    x = _pt(best)
    return x + alpha * rotation_directions(x, se, rng)


def translation_candidates(best, prev, beta: float, se: int, rng) -> np.ndarray:
    x = _pt(best)
    return x + beta * translation_directions(x, _pt(prev), se, rng)


def expansion_candidates(best, gamma: float, se: int, rng) -> np.ndarray:
    x = _pt(best)
    return x + gamma * expansion_directions(x, se, rng)


def axesion_candidates(best, delta: float, se: int, rng) -> np.ndarray:
    x = _pt(best)
    return x + delta * axesion_directions(x, se, rng)


def candidates(kind: OperatorKind, best, factor: float, se: int, rng) -> np.ndarray:
    x = _pt(best)
    return x + factor * DIRECTIONS[kind](x, se, rng)
