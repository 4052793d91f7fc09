"""Best-so-far curves for one function, sampled on a common FE grid.

Reads the per-cell curve CSVs written by the harness and prints the median
best fitness of each variant at evenly spaced FE checkpoints.
"""
import argparse
import csv
from collections import defaultdict
from pathlib import Path

import numpy as np


def step_value(rows, fe):
    best = np.inf
    for f, v in rows:
        if f > fe:
            break
        best = v
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("results", help="directory written by families_table.py or `staopt bench`")
    ap.add_argument("--function", default="F3")
    ap.add_argument("--points", type=int, default=10)
    a = ap.parse_args()
    files = sorted(Path(a.results, "curves").glob(f"{a.function}_D*_*.csv"))
    if not files:
        raise SystemExit(f"no curves for {a.function} under {a.results}")
    series = {}
    top = 0
    for p in files:
        runs = defaultdict(list)
        for r in csv.DictReader(open(p)):
            runs[int(r["run"])].append((int(r["fe"]), float(r["best_fitness"])))
        series[p.stem.split("_D")[1].split("_", 1)[1]] = runs
        top = max(top, max(fe for rr in runs.values() for fe, _ in rr))
    grid = np.linspace(top / a.points, top, a.points).astype(int)
    print("FEs".ljust(10) + "".join(f"{k:>14}" for k in series))
    for fe in grid:
        vals = [np.median([step_value(rr, fe) for rr in runs.values()]) for runs in series.values()]
        print(f"{fe:<10}" + "".join(f"{v:>14.3e}" for v in vals))


if __name__ == "__main__":
    main()
