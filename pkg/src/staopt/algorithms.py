"""The four POSTA variants and the single-run driver."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .core import (
    BudgetExhausted,
    EvalCounter,
    ObjectiveFunction,
    OptimumReached,
    Solution,
    clamp,
    evaluate,
    make_rng,
)
from .history import HistorySet, collect, update_rate, utilize
from .posta import DEFAULT_OMEGA, ParameterState, _notify, posta_iteration
from .qi import average_accuracy, qi_step
from .simplex import NmCoefficients


class Variant(str, Enum):
    POSTA = "POSTA"
    NM_POSTA = "NM_POSTA"
    QI_POSTA = "QI_POSTA"
    NMQI_POSTA = "NMQI_POSTA"

    @classmethod
    def parse(cls, name) -> "Variant":
        if isinstance(name, Variant):
            return name
        key = str(name).strip().upper().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown variant {name!r}") from None

    @property
    def uses_nm(self) -> bool:
        return self in (Variant.NM_POSTA, Variant.NMQI_POSTA)

    @property
    def uses_qi(self) -> bool:
        return self in (Variant.QI_POSTA, Variant.NMQI_POSTA)

    @property
    def keeps_history(self) -> bool:
        return self is not Variant.POSTA


class Termination(str, Enum):
    OPTIMUM_FOUND = "OptimumFound"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass
class VariantConfig:
    variant: Variant = Variant.NMQI_POSTA
    se: int = 50
    tp: int = 10
    ur_threshold: float = 0.5
    aas_threshold: float = 1e-6
    nm_coeffs: NmCoefficients = field(default_factory=NmCoefficients)
    beta: float = 1.0
    omega: tuple = DEFAULT_OMEGA
    seed: int = 0
    # fixed starting point instead of a uniform draw
    start: Optional[tuple] = None

    def __post_init__(self):
        self.variant = Variant.parse(self.variant)
        if not 0 < self.ur_threshold <= 1:
            raise ValueError("ur_threshold must lie in (0, 1]")
        if self.aas_threshold <= 0:
            raise ValueError("aas_threshold must be positive")


@dataclass(frozen=True)
class RunRecord:
    function: str
    dimension: int
    variant: Variant
    seed: int
    trace: list  # (fe, best fitness) at every strict improvement
    final: Solution
    total_fes: int
    terminated_by: Termination
    success: bool
    path: Optional[list] = None


def is_success(fitness: float, target, epsilon: float = 1e-8) -> bool:
    return target is not None and abs(fitness - target) <= epsilon


def initial_point(f: ObjectiveFunction, rng, counter: EvalCounter, start=None) -> Solution:
    if start is not None:
        x = np.asarray(start, dtype=float)
        if x.shape != (f.dimension,):
            raise ValueError(f"start point must have {f.dimension} coordinates")
        x = clamp(x, f.bounds)
    else:
        x = rng.uniform(f.bounds.lower, f.bounds.upper)
    return Solution(x, evaluate(f, x, counter))


class _Driver:
    """Per-run state shared between the POSTA loop and the history hooks."""

    def __init__(self, f: ObjectiveFunction, cfg: VariantConfig, counter: EvalCounter):
        self.f = f
        self.cfg = cfg
        self.counter = counter
        self.history: Optional[HistorySet] = None
        self.utilizations = 0
        self.qi_steps = 0

    def on_improve(self, best: Solution) -> Optional[Solution]:
        self.history = collect(self.history, best)
        if self.cfg.variant.uses_nm and update_rate(self.history) >= self.cfg.ur_threshold:
            self.history, nm_best = utilize(self.history, self.f, self.cfg.nm_coeffs, self.counter)
            self.utilizations += 1
            return nm_best
        return None

    def qi_gate(self) -> bool:
        target = self.f.target_value
        if not self.cfg.variant.uses_qi or target is None:
            return False
        return average_accuracy(self.history, target) <= self.cfg.aas_threshold


def run(
    f: ObjectiveFunction,
    cfg: VariantConfig,
    budget: int,
    term_eps: float = 0.0,
    success_eps: float = 1e-8,
    record_path: bool = False,
) -> RunRecord:
    """Run one variant until the optimum is hit or the budget is spent."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = make_rng(cfg.seed)
    stop = None if f.target_value is None else f.target_value + term_eps
    counter = EvalCounter(budget, stop_value=stop, path=[] if record_path else None)
    ps = ParameterState(omega=cfg.omega, tp=cfg.tp, se=cfg.se, beta=cfg.beta)
    drv = _Driver(f, cfg, counter)
    hook = drv.on_improve if cfg.variant.keeps_history else None
    try:
        best = initial_point(f, rng, counter, cfg.start)
        if cfg.variant.keeps_history:
            drv.history = HistorySet.initial(best, f, counter)
        while True:
            best = posta_iteration(f, best, ps, rng, counter, hook)
            if drv.qi_gate():
                drv.qi_steps += 1
                q = qi_step(drv.history, best, f, rng, counter)
                if q is not best:
                    best = _notify(q, hook)
    except OptimumReached:
        cause = Termination.OPTIMUM_FOUND
    except BudgetExhausted:
        cause = Termination.BUDGET_EXHAUSTED
    final = counter.best
    return RunRecord(
        function=f.name,
        dimension=f.dimension,
        variant=cfg.variant,
        seed=cfg.seed,
        trace=list(counter.trace),
        final=final,
        total_fes=counter.count,
        terminated_by=cause,
        success=is_success(final.fitness, f.target_value, success_eps),
        path=counter.path,
    )
