#!/usr/bin/env python3
"""Write compatibility graphs (and refined graphs where a family exists) as DOT and JSON."""

import argparse

from wgraph_algebra.cli import main as cli_main

TYPES = ["I2(5)", "I2(6)", "A3", "A4", "B3", "D4", "H3", "B4", "F4"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="graphs")
    args = ap.parse_args()
    for spec in TYPES:
        cli_main(["export-graph", "--type", spec, "--out-dir", args.out_dir])


if __name__ == "__main__":
    main()
