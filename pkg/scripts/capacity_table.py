#!/usr/bin/env python3
"""Tabulate capacity lower bounds for ternary inputs and a 3-level output.

For each defective count d, grid-searches the input distribution and all
contiguous 3-region quantizers of the sum range and prints the best rate
objective in bits, the maximizing distribution, and its quantizer.

    python scripts/capacity_table.py --dmax 6 --grid-step 0.01
"""

import argparse
import sys

from sqgt.capacity import capacity_search


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dmax", type=int, default=6)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--Q", type=int, default=3)
    ap.add_argument("--grid-step", type=float, default=0.02)
    args = ap.parse_args()

    print(f"{'d':>3}  {'alpha (bits)':>12}  distribution / quantizer")
    for d in range(1, args.dmax + 1):
        pt, quant, bits = capacity_search(d, args.q, args.Q, grid_step=args.grid_step)
        probs = " ".join(f"{p:.3f}" for p in pt)
        print(f"{d:>3}  {bits:>12.6f}  [{probs}]  {quant}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
