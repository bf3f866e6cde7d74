#!/usr/bin/env python3
"""Compute kOmega for every certified type and print dimensions and timings."""

import argparse
import time

from wgraph_algebra.coxeter import group_order, parse_type
from wgraph_algebra.omega import compute_quotient

TYPES = ["A1", "A1^2", "A1^3", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)", "A3", "B3", "A4"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("types", nargs="*", default=TYPES)
    args = ap.parse_args()
    print(f"{'type':8} {'dim':>6} {'rad':>6} {'semis':>6} {'|W|':>6} {'L':>3} {'sec':>7}")
    for spec in args.types:
        W = parse_type(spec)
        t0 = time.monotonic()
        alg = compute_quotient(W)
        rad = alg.radical()
        dt = time.monotonic() - t0
        print(f"{spec:8} {alg.dim:6} {rad.dim:6} {rad.quotient_dim:6} {group_order(W):6} {alg.length_bound:3} {dt:7.2f}")


if __name__ == "__main__":
    main()
