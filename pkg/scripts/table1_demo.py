"""Two-dimensional POSTA vs NM_POSTA comparison on Rosenbrock and Rastrigin.

Runs until the best value is within 1e-8 of the optimum, prints success
counts and average FEs, and writes the solution paths from (0, 0.75).
"""
import argparse
import sys

from staopt.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", default="30")
    ap.add_argument("--output", default="out/table1")
    a = ap.parse_args()
    sys.exit(main(["demo", "--reps", a.reps, "--output", a.output]))
