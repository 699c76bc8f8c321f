#!/usr/bin/env python3
"""Reproduce the accuracy tables: smooth advection and smooth Euler ladders
for the plain, OE, and MP limiter variants."""

import argparse

from pampa import run as run_mod
from pampa.config import load_config

LADDER = [20, 40, 80, 160, 320, 640, 1280]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", default=",".join(str(n) for n in LADDER))
    ap.add_argument("--preset", nargs="*",
                    default=["advection_smooth", "euler_smooth"])
    args = ap.parse_args()
    n_list = [int(s) for s in args.N.split(",")]

    for preset in args.preset:
        for osc in ("none", "oe", "mp"):
            cfg = load_config(preset).with_overrides(oscillation=osc)
            rows = run_mod.convergence_table(cfg, n_list)
            print(f"\n== {preset} [oscillation={osc}] ==")
            print(run_mod.format_convergence(rows))


if __name__ == "__main__":
    main()
