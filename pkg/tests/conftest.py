import numpy as np
import pytest

from staopt.core import Bounds, EvalCounter, ObjectiveFunction


def quad_objective(dim=2, lo=-100.0, hi=100.0, func=None, target=0.0, name="quad"):
    func = func or (lambda X: np.sum(X**2, axis=1))
    return ObjectiveFunction(name, dim, Bounds.box(lo, hi, dim), func, target)


class Recorder:
    """Wraps a vectorised objective and keeps every point it is asked about."""

    def __init__(self, func):
        self.func = func
        self.points = []

    def __call__(self, X):
        self.points.extend(np.array(X, copy=True))
        return self.func(X)


@pytest.fixture
def sphere2():
    return quad_objective(2)


@pytest.fixture
def counter():
    return EvalCounter(10**9)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
