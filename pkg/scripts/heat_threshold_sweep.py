"""Reproduce the heat-equation admissibility threshold at p = 4/3.

Sweeps the L^p exponent for the 1-d Neumann-control heat system and records
the criterion constant and verdict per p.  The verdict flips from
unbounded-evidence to bounded-evidence between p = 1.30 and p = 1.35.

Usage: python3 scripts/heat_threshold_sweep.py [--modes K] [--out sweep.csv]
"""

import argparse
import csv
import sys
import time

from admiss.criteria import c2_power_square, c4_strip_summability
from admiss.system_model import heat_system, spectral_measure

P_VALUES = [1.20, 1.30, 1.35, 1.40, 1.50, 2.0, 3.0, 4.0]
N_RANGE = (-10, 45)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--modes", type=int, default=100000)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    start = time.perf_counter()
    mu = spectral_measure(heat_system(args.modes))
    rows = []
    for p in P_VALUES:
        if p <= 2:
            report = c2_power_square(mu, p, 2.0, symmetric_only=True, n_range=N_RANGE)
        else:
            report = c4_strip_summability(mu, p, 2.0, n_range=N_RANGE)
        rows.append((p, report.criterion, report.constant, report.verdict))
        print(f"p = {p:<5g} {report.criterion}  constant = {report.constant:#.6g}  {report.verdict}")
    print(f"total {time.perf_counter() - start:.2f} s for K = {args.modes}")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "criterion", "constant", "verdict"])
            writer.writerows(rows)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
