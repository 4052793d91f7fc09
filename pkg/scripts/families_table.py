"""All four variants on the fourteen benchmarks at one dimension.

Writes summary.csv / curves / metadata.json and prints a compact
Mean(Std) / Ave FEs table with rank-sum marks against NMQI_POSTA.
"""
import argparse
import csv
from pathlib import Path

from staopt.algorithms import Variant, VariantConfig
from staopt.benchmarks import BENCHMARKS
from staopt.harness import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dim", type=int, default=20)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--functions", default=",".join(BENCHMARKS))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output", default=None)
    a = ap.parse_args()
    out = Path(a.output or f"out/families_D{a.dim}")
    cfg = ExperimentConfig(
        functions=[(f, a.dim) for f in a.functions.split(",")],
        variants=[VariantConfig(variant=v) for v in Variant],
        repetitions=a.reps,
        base_seed=a.seed,
        reference="NMQI_POSTA",
        workers=a.workers,
    )
    run_experiment(cfg, out)
    rows = list(csv.DictReader(open(out / "summary.csv")))
    print(f"{'fn':<5}" + "".join(f"{v.value:>34}" for v in Variant))
    for fid, _ in cfg.functions:
        cells = {r["variant"]: r for r in rows if r["function"] == fid}
        line = f"{fid:<5}"
        for v in Variant:
            r = cells[v.value]
            if not r["mean"]:
                line += f"{'error':>34}"
                continue
            txt = f"{float(r['mean']):.2e}({float(r['std']):.1e}){r['significance']} {float(r['ave_fes']):.2e}"
            line += f"{txt:>34}"
        print(line)


if __name__ == "__main__":
    main()
