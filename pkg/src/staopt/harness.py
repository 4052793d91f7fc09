"""Repeated-run experiments: budgets, summaries, rank-sum marks and CSV export."""
from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .algorithms import RunRecord, Termination, Variant, VariantConfig, run
from .benchmarks import BENCHMARKS, get_spec, make
from .core import EvalCounter, ObjectiveFunction, Solution

SUMMARY_HEADER = ["function", "D", "variant", "mean", "std", "ave_fes", "success", "runs", "significance"]
CURVE_HEADER = ["run", "fe", "best_fitness"]
EXACT_LIMIT = 20


class EmptyInput(ValueError):
    pass


def fe_budget(D: int) -> int:
    """Evaluation cap ``floor(5000 * D * ln D)``."""
    if D < 2:
        raise ValueError("the budget formula needs D >= 2")
    return int(math.floor(5000 * D * math.log(D)))


def is_terminated(
    best: Solution, f: ObjectiveFunction, counter: EvalCounter, term_eps: float = 0.0
) -> Optional[Termination]:
    if f.target_value is not None and abs(best.fitness - f.target_value) <= term_eps:
        return Termination.OPTIMUM_FOUND
    if counter.remaining <= 0:
        return Termination.BUDGET_EXHAUSTED
    return None


def is_success(record: RunRecord, target, epsilon: float = 1e-8) -> bool:
    return target is not None and abs(record.final.fitness - target) <= epsilon


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std: float  # sample std, n-1 denominator; 0 for a single run
    ave_fes: float
    success_count: int
    runs: int


def summarize(records: Sequence[RunRecord]) -> SummaryStats:
    if not records:
        raise EmptyInput("cannot summarise an empty list of runs")
    finals = np.array([r.final.fitness for r in records])
    fes = np.array([r.total_fes for r in records], dtype=float)
    std = float(np.std(finals, ddof=1)) if len(finals) > 1 else 0.0
    return SummaryStats(
        mean=float(np.mean(finals)),
        std=std,
        ave_fes=float(np.mean(fes)),
        success_count=sum(bool(r.success) for r in records),
        runs=len(records),
    )


# ---------------------------------------------------------------- rank sum


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    sv = values[order]
    ranks = np.empty(len(values))
    i = 0
    while i < len(sv):
        j = i
        while j + 1 < len(sv) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _exact_p(ranks2: list, n: int, w2: int) -> float:
    """Two-sided exact p from doubled (integer) midranks.

    Counts size-``n`` subsets whose doubled rank sum lies at least as far
    from the null mean as the observed ``w2``.
    """
    N = len(ranks2)
    # counts[k] maps a doubled rank sum to the number of k-subsets reaching it
    counts = [dict() for _ in range(n + 1)]
    counts[0][0] = 1
    for r in ranks2:
        for k in range(min(n, N) - 1, -1, -1):
            src = counts[k]
            if not src:
                continue
            dst = counts[k + 1]
            for s, c in src.items():
                dst[s + r] = dst.get(s + r, 0) + c
    total = math.comb(N, n)
    # 2 * N * (null mean of the doubled sum), kept integral
    mean2N = n * sum(ranks2)
    dev = abs(N * w2 - mean2N)
    hits = sum(c for s, c in counts[n].items() if abs(N * s - mean2N) >= dev)
    return float(Fraction(hits, total))


def rank_sum_pvalue(a, b) -> tuple[float, float]:
    """Two-sided Wilcoxon rank-sum p-value and the standardised effect of ``a``.

    The second value is ``W_a - E[W_a]``; negative means ``a`` tends to be
    smaller than ``b``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n, m = len(a), len(b)
    if n < 1 or m < 1:
        raise ValueError("both samples must be non-empty")
    ranks = _midranks(np.concatenate([a, b]))
    N = n + m
    w = float(np.sum(ranks[:n]))
    shift = w - n * (N + 1) / 2
    if N <= EXACT_LIMIT:
        ranks2 = [int(round(2 * r)) for r in ranks]
        return _exact_p(ranks2, n, sum(ranks2[:n])), shift
    _, t = np.unique(ranks, return_counts=True)
    tie = float(np.sum(t**3 - t)) / (N * (N - 1))
    var = n * m / 12 * ((N + 1) - tie)
    if var <= 0:
        return 1.0, 0.0
    z = shift / math.sqrt(var)
    return min(1.0, math.erfc(abs(z) / math.sqrt(2))), shift


def rank_sum_test(a, b, alpha: float = 0.05) -> str:
    """Significance mark of ``a`` against the reference ``b`` (lower is better).

    ``+`` when ``a`` is significantly lower, ``-`` when significantly higher,
    ``≈`` otherwise, including when every value in both samples is the same.
    """
    if len(a) < 2 or len(b) < 2:
        raise ValueError("rank-sum test needs at least two values per sample")
    allv = np.concatenate([np.asarray(a, float), np.asarray(b, float)])
    if np.all(allv == allv[0]):
        return "≈"
    p, shift = rank_sum_pvalue(a, b)
    if p >= alpha or shift == 0:
        return "≈"
    return "+" if shift < 0 else "-"


# ---------------------------------------------------------------- experiments


@dataclass
class ExperimentConfig:
    functions: list  # (benchmark id, D) pairs
    variants: list = field(default_factory=lambda: [VariantConfig()])
    repetitions: int = 30
    budget: Optional[int] = None  # None: fe_budget(D)
    success_epsilon: float = 1e-8
    termination_epsilon: float = 0.0
    base_seed: int = 0
    reference: Optional[str] = None  # variant the significance column is measured against
    alpha: float = 0.05
    workers: int = 1

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        self.functions = [(get_spec(fid).id, int(D)) for fid, D in self.functions]
        for _, D in self.functions:
            if D < 2:
                raise ValueError("benchmark dimension must be at least 2")
        self.variants = [v if isinstance(v, VariantConfig) else VariantConfig(variant=v) for v in self.variants]
        names = [v.variant for v in self.variants]
        if len(set(names)) != len(names):
            raise ValueError("each variant may appear only once")
        if self.reference is not None:
            self.reference = Variant.parse(self.reference)
            if self.reference not in names:
                raise ValueError(f"reference {self.reference.value} is not among the variants")

    def budget_for(self, D: int) -> int:
        return self.budget if self.budget is not None else fe_budget(D)


def quick_profile(**overrides) -> ExperimentConfig:
    """Desk-scale protocol: 10 repetitions, D in {2, 20}."""
    fns = [("F3", 2), ("F7", 2)] + [(fid, 20) for fid in BENCHMARKS]
    base = dict(functions=fns, variants=[VariantConfig(variant=v) for v in Variant], repetitions=10)
    base.update(overrides)
    return ExperimentConfig(**base)


@dataclass
class CellResult:
    function: str
    D: int
    variant: Variant
    records: list
    stats: Optional[SummaryStats] = None
    significance: str = ""
    error: Optional[str] = None

    @property
    def key(self) -> str:
        return f"{self.function}_D{self.D}_{self.variant.value}"


def _one_run(job):
    fid, D, vcfg, seed, budget, term_eps, succ_eps = job
    cfg = VariantConfig(**{**vars(vcfg), "seed": seed})
    try:
        return run(make(fid, D), cfg, budget, term_eps=term_eps, success_eps=succ_eps), None
    except Exception as exc:  # kept per cell, the matrix carries on
        return None, f"seed {seed}: {type(exc).__name__}: {exc}"


def _jobs(cfg: ExperimentConfig):
    for fid, D in cfg.functions:
        for v in cfg.variants:
            for i in range(cfg.repetitions):
                yield (fid, D, v, cfg.base_seed + i, cfg.budget_for(D), cfg.termination_epsilon, cfg.success_epsilon)


def run_cells(cfg: ExperimentConfig) -> list:
    jobs = list(_jobs(cfg))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outs = list(pool.map(_one_run, jobs, chunksize=1))
    else:
        outs = [_one_run(j) for j in jobs]
    by_key: dict = {}
    for job, (rec, err) in zip(jobs, outs):
        fid, D, v = job[0], job[1], job[2].variant
        cell = by_key.setdefault((fid, D, v), CellResult(fid, D, v, []))
        if err is not None:
            cell.error = err if cell.error is None else f"{cell.error}; {err}"
        else:
            cell.records.append(rec)
    cells = list(by_key.values())
    for c in cells:
        c.records.sort(key=lambda r: r.seed)
        if c.error is None:
            c.stats = summarize(c.records)
    if cfg.reference is not None:
        refs = {(c.function, c.D): c for c in cells if c.variant is cfg.reference}
        for c in cells:
            ref = refs.get((c.function, c.D))
            if c is ref or ref is None or c.error or ref.error:
                continue
            if len(c.records) >= 2 and len(ref.records) >= 2:
                c.significance = rank_sum_test(
                    [r.final.fitness for r in c.records], [r.final.fitness for r in ref.records], cfg.alpha
                )
    return cells


def _fmt(x) -> str:
    return repr(float(x))


def curve_rows(records: Sequence[RunRecord]) -> list:
    """``(run, fe, best)`` rows: every improvement plus the value at termination."""
    rows = []
    for i, r in enumerate(records):
        trace = list(r.trace)
        if not trace or trace[-1][0] != r.total_fes:
            trace.append((r.total_fes, r.final.fitness))
        rows.extend((i, fe, v) for fe, v in trace)
    rows.sort(key=lambda t: (t[0], t[1]))
    return rows


def write_summary(cells: Sequence[CellResult], path: Path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for c in cells:
            if c.stats is None:
                w.writerow([c.function, c.D, c.variant.value, "", "", "", "", len(c.records), ""])
                continue
            s = c.stats
            w.writerow([c.function, c.D, c.variant.value, _fmt(s.mean), _fmt(s.std), _fmt(s.ave_fes),
                        s.success_count, s.runs, c.significance])


def write_curves(cell: CellResult, path: Path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVE_HEADER)
        for run_i, fe, v in curve_rows(cell.records):
            w.writerow([run_i, fe, _fmt(v)])


def _config_echo(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d["variants"] = [{**asdict(v), "variant": v.variant.value, "omega": list(v.omega)} for v in cfg.variants]
    d["reference"] = cfg.reference.value if cfg.reference else None
    return d


def run_experiment(cfg: ExperimentConfig, out_dir) -> list:
    """Run the whole matrix and write ``summary.csv``, ``curves/*.csv`` and ``metadata.json``."""
    out = Path(out_dir)
    (out / "curves").mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    cells = run_cells(cfg)
    wall = time.perf_counter() - t0
    write_summary(cells, out / "summary.csv")
    for c in cells:
        write_curves(c, out / "curves" / f"{c.key}.csv")
    meta = {
        "version": __version__,
        "config": _config_echo(cfg),
        "seeds": [cfg.base_seed + i for i in range(cfg.repetitions)],
        "budgets": {str(D): cfg.budget_for(D) for _, D in cfg.functions},
        "std": "sample standard deviation (n-1 denominator)",
        "errors": {c.key: c.error for c in cells if c.error},
        "wall_clock_seconds": wall,
        "workers": cfg.workers,
    }
    with open(out / "metadata.json", "w") as fh:
        json.dump(meta, fh, indent=2, default=str)
    return cells
