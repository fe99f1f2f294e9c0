#!/usr/bin/env python3
"""Measure surfaces of the binary loop over the (phi, psi) plane.

Writes one CSV with all six measures on a 51x51 grid for three policy
sharpness values (random, intermediate, effectively deterministic), the
data behind the surface plots.

Usage: python scripts/binary_surfaces.py [--out DIR] [--resolution N]
"""

import argparse
import sys

from morphocomp.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/binary", help="output directory")
    parser.add_argument("--resolution", type=int, default=51, help="grid points per axis")
    args = parser.parse_args()

    step = 5.0 / (args.resolution - 1) if args.resolution > 1 else 1.0
    grid = [f"{i * step:.10g}" for i in range(args.resolution)]
    return cli_main(
        ["binary-sweep", "--phi", *grid, "--psi", *grid, "--mu", "0", "1", "20",
         "--out", args.out]
    )


if __name__ == "__main__":
    sys.exit(main())
