#!/usr/bin/env python3
"""Averaged measures at the four highlighted pendulum configurations.

Runs 100 seeded episodes of 5000 control updates per cell, estimates a
model per episode and prints the averaged intrinsic measures:

  (eta, beta) = (0, 2.0)  coasting inside a wide deadband
  (eta, beta) = (0, 0)    micromanaged at every step
  (eta, beta) = (0.5, 0)  micromanaged through a noisy sensor
  (eta, beta) = (0.5, 2)  wide deadband with a noisy sensor

Usage: python scripts/rotator_reference_cells.py [--runs N] [--seed N]
"""

import argparse

from morphocomp.rotator import RotatorConfig, cell_measures

CELLS = [(0.0, 2.0), (0.0, 0.0), (0.5, 0.0), (0.5, 2.0)]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cfg = RotatorConfig(seed=args.seed)
    print(f"{'eta':>5} {'beta':>5} {'asoc_a':>8} {'c_a':>8} {'asoc_w':>8} {'c_w':>8}")
    for eta, beta in CELLS:
        values = cell_measures(cfg, eta, beta, runs=args.runs)
        print(
            f"{eta:5.2f} {beta:5.2f} "
            f"{values['asoc_a']:8.4f} {values['c_a']:8.4f} "
            f"{values['asoc_w']:8.4f} {values['c_w']:8.4f}"
        )


if __name__ == "__main__":
    main()
