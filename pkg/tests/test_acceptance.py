"""One test per acceptance criterion; each reports a single PASS/FAIL line."""
import itertools
import math
from functools import lru_cache
from math import comb

import numpy as np
import pytest

from staopt.algorithms import VariantConfig, run
from staopt.benchmarks import make
from staopt.cli import main
from staopt.core import Bounds, EvalCounter, Solution
from staopt.harness import fe_budget, rank_sum_pvalue
from staopt.operators import OperatorKind
from staopt.posta import ParameterState, select_parameter
from staopt.qi import QiAgents, qi_point
from staopt.simplex import NmCoefficients, Simplex, nm_iterate

from conftest import ACCEPTANCE_LINES, Recorder, quad_objective

RUNS = 10


def report(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@lru_cache(maxsize=None)
def d20(fid, variant, seed):
    D = 20
    r = run(make(fid, D), VariantConfig(variant=variant, seed=seed), fe_budget(D))
    return r.final.fitness, r.total_fes


def test_c1_budget_formula():
    caps = {20: 3.01e5, 30: 5.12e5, 50: 9.80e5}
    got = {D: fe_budget(D) for D in caps}
    oracle = {D: int(5000 * D * math.log(D)) for D in caps}
    ok = got == oracle and all(abs(got[D] - caps[D]) / caps[D] <= 0.005 for D in caps)
    ok &= got[20] == 299573 and got[50] == 978005
    report(1, ok, f"fe_budget = {got}")


def test_c2_two_dimensional_protocol():
    res = {}
    for fid in ("F3", "F7"):
        for v in ("POSTA", "NM_POSTA"):
            recs = [run(make(fid, 2), VariantConfig(variant=v, seed=s), 1_000_000, term_eps=1e-8)
                    for s in range(RUNS)]
            res[fid, v] = (sum(r.success for r in recs), np.mean([r.total_fes for r in recs]))
    ratio = res["F3", "NM_POSTA"][1] / res["F3", "POSTA"][1]
    ok = all(s == RUNS for s, _ in res.values()) and ratio <= 0.8
    detail = ", ".join(f"{f}/{v} {s}/{RUNS} FEs {fe:.0f}" for (f, v), (s, fe) in res.items())
    report(2, ok, f"{detail}; F3 NM/POSTA FE ratio {ratio:.2f}")


def test_c3_exact_zeros_at_d20():
    zeros = ["F3", "F5", "F6", "F7", "F9", "F12", "F13", "F14"]
    floor = ["F2", "F10"]
    means = {fid: float(np.mean([d20(fid, "NMQI_POSTA", s)[0] for s in range(RUNS)])) for fid in zeros + floor}
    bad = [f for f in zeros if means[f] != 0.0] + [f for f in floor if not means[f] <= 3e-32]
    detail = ", ".join(f"{f} {means[f]:.3g}" for f in zeros + floor)
    report(3, not bad, f"NMQI_POSTA mean finals: {detail}" + (f"; failing {bad}" if bad else ""))


def test_c4_variant_ordering():
    ave = {}
    for fid in ("F1", "F6", "F9"):
        for v in ("POSTA", "NM_POSTA", "QI_POSTA", "NMQI_POSTA"):
            ave[fid, v] = float(np.mean([d20(fid, v, s)[1] for s in range(RUNS)]))
    ratios = {(f, v): ave[f, v] / ave[f, "POSTA"] for f in ("F1", "F6", "F9") for v in ("QI_POSTA", "NMQI_POSTA")}
    ok = all(r <= 0.6 for r in ratios.values())
    detail = "; ".join(
        f"{f}: POSTA {ave[f, 'POSTA']:.3g} NM {ave[f, 'NM_POSTA']:.3g} QI {ave[f, 'QI_POSTA']:.3g} "
        f"NMQI {ave[f, 'NMQI_POSTA']:.3g}" for f in ("F1", "F6", "F9")
    )
    report(4, ok, f"max QI-family/POSTA FE ratio {max(ratios.values()):.2f} (<= 0.6); {detail}")


def test_c5_qi_exact_on_quadratics():
    rng = np.random.default_rng(2024)
    bounds = Bounds.box(-1e9, 1e9, 1)
    worst = 0.0
    for _ in range(1000):
        c = 10 ** rng.uniform(-3, 3)
        v = rng.uniform(-100, 100)
        k = rng.uniform(-10, 10)
        xs = rng.uniform(v - 50, v + 50, 3)
        while len(set(xs)) < 3:
            xs = rng.uniform(v - 50, v + 50, 3)
        a, b, s = (Solution(np.array([x]), c * (x - v) ** 2 + k) for x in xs)
        x = qi_point(QiAgents(a, b, s), bounds)[0]
        worst = max(worst, abs(x - v) / max(abs(v), 1.0))
    report(5, worst <= 1e-10, f"worst relative vertex error over 1000 quadratics {worst:.2e}")


def test_c6_nm_hand_trace():
    f = quad_objective(2)
    mk = lambda p: Solution(np.array(p, float), f(np.array(p, float)))
    s = Simplex([mk((0, 0)), mk((1, 0)), mk((0, 1))])
    rec = Recorder(f.func)
    g = quad_objective(2, func=rec)
    out = nm_iterate(s, g, NmCoefficients(), EvalCounter(10))
    trial = [tuple(float(c) for c in p) for p in rec.points]
    ok = trial == [(1.0, -1.0), (0.25, 0.5)] and out.step == "inside"
    ok &= [tuple(v.point) for v in out.vertices] == [(0, 0), (1, 0), (0.25, 0.5)] and out.vertices[2].fitness == 0.3125
    # the reflection was taken through the centroid (0.5, 0)
    ok &= np.array_equal((np.array(trial[0]) + np.array([0.0, 1.0])) / 2, [0.5, 0.0])
    report(6, ok, f"evaluated {trial}, step {out.step}, new vertex f={out.vertices[2].fitness}")


def test_c7_selection_oracle():
    mism = 0
    kinds = [OperatorKind.ROTATION, OperatorKind.EXPANSION, OperatorKind.AXESION]
    for trial in range(100):
        rng = np.random.default_rng(trial)
        fid = ["F3", "F7", "F8", "F11"][trial % 4]
        base = make(fid, 5)
        rec = Recorder(base.func)
        f = quad_objective(5, func=rec, lo=base.bounds.lower[0], hi=base.bounds.upper[0])
        x = rng.uniform(base.bounds.lower, base.bounds.upper)
        best = Solution(x, f(x))
        rec.points.clear()
        ps = ParameterState()
        chosen, nb = select_parameter(f, best, kinds[trial % 3], ps, rng, EvalCounter(10**6))
        grid = np.array(rec.points)
        scan = [float(base.func(p[None, :])[0]) for p in grid]
        i = int(np.argmin(scan))
        mism += not (min(scan[i], best.fitness) == nb.fitness and chosen == ps.omega[i // ps.se])
    report(7, mism == 0, f"{100 - mism}/100 selections equal the brute-force re-scan")


def enum_p(a, b):
    pool = list(a) + list(b)
    N, n = len(pool), len(a)
    srt = sorted(pool)
    r2 = {v: srt.index(v) * 2 + srt.count(v) + 1 for v in set(pool)}  # doubled midrank
    ranks = [r2[v] for v in pool]
    mean2N = n * sum(ranks)
    obs = abs(N * sum(ranks[:n]) - mean2N)
    hits = sum(abs(N * sum(ranks[i] for i in c) - mean2N) >= obs for c in itertools.combinations(range(N), n))
    return hits / comb(N, n)


def test_c8_rank_sum_exact():
    rng = np.random.default_rng(8)
    pairs = [(n, m) for n in range(1, 12) for m in range(1, 12) if n + m <= 12]
    worst = 0.0
    for k in range(200):
        n, m = pairs[k % len(pairs)]
        a, b = rng.integers(0, 8, n).tolist(), rng.integers(0, 8, m).tolist()
        worst = max(worst, abs(rank_sum_pvalue(a, b)[0] - enum_p(a, b)))
    report(8, worst <= 1e-12, f"max |p - enumeration| over 200 samples, {len(pairs)} size pairs: {worst:.1e}")


def test_c9_bench_determinism(tmp_path, capsys):
    cfg = tmp_path / "bench.ini"
    cfg.write_text("[experiment]\nfunction = F3, F7, F11\ndim = 2, 5\nvariant = POSTA, NMQI_POSTA\nreps = 3\n"
                   "budget = 20000\nseed = 3\nreference = POSTA\n")
    codes = [main(["bench", "--config", str(cfg), "--output", str(tmp_path / d)]) for d in ("a", "b")]
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*.csv"))
    same = all((tmp_path / "a" / p).read_bytes() == (tmp_path / "b" / p).read_bytes() for p in files)
    report(9, codes == [0, 0] and same and len(files) == 13, f"{len(files)} CSV files byte-identical: {same}")
