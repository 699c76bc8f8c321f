#!/usr/bin/env python3
"""Regenerate the golden SVGs used by the structural regression test."""

from pathlib import Path

from pampa import run as run_mod
from pampa.config import load_config
from pampa.svgplot import write_solution_svgs

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "goldens"


def main():
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    cfg = load_config("sod")
    scheme = run_mod.build_scheme(cfg)
    field = run_mod.initial_field(cfg, scheme)
    field, steps, _ = run_mod.advance(scheme, field, cfg.t_final, cfg.cfl,
                                      cfg.integrator)
    paths = write_solution_svgs(GOLDEN_DIR, "sod", scheme, field)
    (GOLDEN_DIR / "density.svg").rename(GOLDEN_DIR / "sod_density.svg")
    for p in GOLDEN_DIR.glob("*.svg"):
        if p.name != "sod_density.svg":
            p.unlink()
    print(f"wrote {GOLDEN_DIR / 'sod_density.svg'} ({steps} steps)")


if __name__ == "__main__":
    main()
