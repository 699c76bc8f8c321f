#!/usr/bin/env python3
"""Run every bundled benchmark preset into out/<label>/ with SVG plots.

The two MHD runs take a few minutes each; pass --quick to shrink every run
(coarser grid, earlier stop) for a fast smoke pass.
"""

import argparse
import time
from pathlib import Path

from pampa import run as run_mod
from pampa.config import load_config, preset_names


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out")
    ap.add_argument("--quick", action="store_true",
                    help="quarter resolution, one tenth of the final time")
    ap.add_argument("--only", nargs="*", default=None)
    args = ap.parse_args()

    names = args.only or preset_names()
    for name in names:
        cfg = load_config(name)
        if args.quick:
            cfg = cfg.with_overrides(n=max(16, cfg.n // 4) | 1,
                                     t_final=cfg.t_final / 10.0)
        t0 = time.time()
        paths = run_mod.run_to_files(cfg, Path(args.out) / name, svg=True)
        meta = paths["meta"]
        print(f"{name:22s} {time.time() - t0:7.1f}s  -> {meta.parent}")


if __name__ == "__main__":
    main()
