#!/usr/bin/env python3
"""Degree sweep at the full synthetic scale (250 platforms, 10,000 items,
20 groups of 500, per-group bound 2), all three greedy variants.

Writes the standard sweep CSV; use --small for a quick 1/5-scale run.
"""

import argparse
import sys

from diverse_match.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="degree_sweep.csv")
    ap.add_argument("--seeds", type=int, default=15)
    ap.add_argument("--degrees", default="1:125:5")
    ap.add_argument("--small", action="store_true", help="1/5-scale shape")
    ap.add_argument("--timing", action="store_true")
    args = ap.parse_args()

    items, platforms, groups = (2000, 50, 20) if args.small else (10_000, 250, 20)
    argv = [
        "sweep", "--problem", "lb",
        "--items", str(items), "--platforms", str(platforms),
        "--groups", str(groups), "--group-lb", "2",
        "--degrees", args.degrees, "--seeds", str(args.seeds),
        "--out", args.out,
    ]
    if args.timing:
        argv.append("--timing")
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
