"""The fourteen test functions F1-F14, vectorised over rows.

Every function maps an ``(n, D)`` array to ``n`` values. F2 is the usual
Penalized 1 (``y_i = 1 + (x_i + 1)/4`` and a ``1 + 10 sin^2`` weight) and F4
the usual Schwefel 1.2 with an inner sum up to ``i``. F1 and F9 sum from
the second coordinate, and F13 uses sixth powers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Bounds, ObjectiveFunction


class UnknownFunction(KeyError):
    pass


def penalty_u(x, a: float, k: float, m: float):
    x = np.asarray(x, dtype=float)
    return np.where(x > a, k * (x - a) ** m, np.where(x < -a, k * (-x - a) ** m, 0.0))


def elliptic(X):
    D = X.shape[1]
    w = (1e6) ** (np.arange(D) / (D - 1))
    return np.sum(w[1:] * X[:, 1:] ** 2, axis=1)


def penalized1(X):
    D = X.shape[1]
    y = 1 + (X + 1) / 4
    inner = np.sum((y[:, :-1] - 1) ** 2 * (1 + 10 * np.sin(np.pi * y[:, 1:]) ** 2), axis=1)
    core = 10 * np.sin(np.pi * y[:, 0]) ** 2 + inner + (y[:, -1] - 1) ** 2
    return np.pi / D * core + np.sum(penalty_u(X, 10, 100, 4), axis=1)


def rosenbrock(X):
    return np.sum(100 * (X[:, 1:] - X[:, :-1] ** 2) ** 2 + (X[:, :-1] - 1) ** 2, axis=1)


def schwefel_1_2(X):
    return np.sum(np.cumsum(X, axis=1) ** 2, axis=1)


def schwefel_2_4(X):
    return np.sum((X - 1) ** 2 + (X[:, :1] - X**2) ** 2, axis=1)


def sphere(X):
    return np.sum(X**2, axis=1)


def rastrigin(X):
    return np.sum(X**2 - 10 * np.cos(2 * np.pi * X) + 10, axis=1)


def griewank(X):
    i = np.arange(1, X.shape[1] + 1)
    return np.sum(X**2, axis=1) / 4000 - np.prod(np.cos(X / np.sqrt(i)), axis=1) + 1


def sum_squares(X):
    i = np.arange(1, X.shape[1] + 1)
    return np.sum(i[1:] * X[:, 1:] ** 2, axis=1)


def levy_montalvo1(X):
    D = X.shape[1]
    y = 1 + (X + 1) / 4
    inner = np.sum((y[:, :-1] - 1) ** 2 * (1 + 10 * np.sin(np.pi * y[:, 1:]) ** 2), axis=1)
    return np.pi / D * (10 * np.sin(np.pi * y[:, 0]) ** 2 + inner + (y[:, -1] - 1) ** 2)


def zakharov(X):
    i = np.arange(1, X.shape[1] + 1)
    s = np.sum(0.5 * i * X, axis=1)
    return np.sum(X**2, axis=1) + s**2 + s**4


def schwefel_2_22(X):
    A = np.abs(X)
    return np.sum(A, axis=1) + np.prod(A, axis=1)


def cigar(X):
    return X[:, 0] ** 2 + 1e6 * np.sum(X[:, 1:] ** 6, axis=1)


def csendes(X):
    p = X**6
    with np.errstate(divide="ignore", invalid="ignore"):
        t = p * (2 + np.sin(1 / X))
    return np.sum(np.where(p == 0, 0.0, t), axis=1)


@dataclass(frozen=True)
class BenchmarkSpec:
    id: str
    name: str
    lower: float
    upper: float
    modality: str
    func: Callable[[np.ndarray], np.ndarray]
    minimizer_value: float = 0.0  # every coordinate of the known minimiser
    f_min: float = 0.0

    def minimizer(self, dim: int) -> np.ndarray:
        return np.full(dim, self.minimizer_value)


_SPECS = [
    BenchmarkSpec("F1", "Elliptic", -100, 100, "Unimodal", elliptic),
    BenchmarkSpec("F2", "Penalized 1", -50, 50, "Multimodal", penalized1, -1.0),
    BenchmarkSpec("F3", "Rosenbrock", -30, 30, "Unimodal", rosenbrock, 1.0),
    BenchmarkSpec("F4", "Schwefel 1.2", -100, 100, "Unimodal", schwefel_1_2),
    BenchmarkSpec("F5", "Schwefel 2.4", 0, 10, "Multimodal", schwefel_2_4, 1.0),
    BenchmarkSpec("F6", "Sphere", -100, 100, "Unimodal", sphere),
    BenchmarkSpec("F7", "Rastrigin", -5.12, 5.12, "Multimodal", rastrigin),
    BenchmarkSpec("F8", "Griewank", -60, 60, "Multimodal", griewank),
    BenchmarkSpec("F9", "Sum squares", -10, 10, "Unimodal", sum_squares),
    BenchmarkSpec("F10", "Levy and Montalvo 1", -10, 10, "Multimodal", levy_montalvo1, -1.0),
    BenchmarkSpec("F11", "Zakharov", -5, 10, "Unimodal", zakharov),
    BenchmarkSpec("F12", "Schwefel 2.22", -10, 10, "Unimodal", schwefel_2_22),
    BenchmarkSpec("F13", "Cigar", -100, 100, "Unimodal", cigar),
    BenchmarkSpec("F14", "Csendes", -1, 1, "Multimodal", csendes),
]

BENCHMARKS = {s.id: s for s in _SPECS}


def get_spec(fid: str) -> BenchmarkSpec:
    try:
        return BENCHMARKS[fid.upper()]
    except KeyError:
        raise UnknownFunction(f"unknown benchmark id {fid!r} (expected F1..F14)") from None


def make(fid: str, dim: int) -> ObjectiveFunction:
    spec = get_spec(fid)
    if dim < 2:
        raise ValueError("benchmark dimension must be at least 2")
    return ObjectiveFunction(
        name=spec.id,
        dimension=dim,
        bounds=Bounds.box(spec.lower, spec.upper, dim),
        func=spec.func,
        target_value=spec.f_min,
    )
