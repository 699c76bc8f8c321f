"""Command-line runner: benchmark runs, convergence tables, reference
solutions, and verification suites."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import oracle, run as run_mod
from .config import build_system, load_config, preset_names
from .errors import PampaError
from .systems import Euler, IdealMHD, advection, burgers


def _add_common(p):
    p.add_argument("--out", default=None, help="output directory or file")
    p.add_argument("--seed", type=int, default=42,
                   help="seed for randomised verification (runs are deterministic)")


def _overrides(args):
    return dict(n=args.n, oscillation=args.oscillation, t_final=args.t_final,
                integrator=args.integrator, cfl=args.cfl)


def cmd_run(args) -> int:
    cfg = load_config(args.config).with_overrides(**_overrides(args))
    outdir = Path(args.out or f"out/{cfg.label}")
    paths = run_mod.run_to_files(cfg, outdir, svg=args.svg,
                                 snapshot_every=args.snapshots)
    print(f"{cfg.label}: wrote {paths['cells']}, {paths['nodes']}, "
          f"{paths['diagnostics']}")
    return 0


def cmd_convergence(args) -> int:
    cfg = load_config(args.config).with_overrides(
        oscillation=args.oscillation, integrator=args.integrator, cfl=args.cfl)
    n_list = [int(s) for s in args.N.split(",")]
    rows = run_mod.convergence_table(cfg, n_list)
    print(run_mod.format_convergence(rows))
    if args.out:
        run_mod.write_convergence_csv(rows, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_reference(args) -> int:
    cfg = load_config(args.config)
    outdir = Path(args.out or f"out/{cfg.label}_reference")
    path = run_mod.write_reference_csv(cfg, args.n, outdir, cfl=args.cfl)
    print(f"wrote {path}")
    return 0


def _verify_systems(which):
    table = {
        "euler": Euler(gamma=1.4),
        "mhd": IdealMHD(gamma=5.0 / 3.0, bx=0.75),
        "burgers": burgers(-1.0, 2.0),
        "advection": advection(0.0, 1.0),
    }
    if which == "all":
        return list(table.values())
    if which not in table:
        raise PampaError(f"unknown system {which!r}")
    return [table[which]]


def _verify_splitting(args) -> list[str]:
    lines = []
    for system in _verify_systems(args.system):
        rep = oracle.sample_lf_splitting(system, args.samples, args.seed)
        lines.append(rep.summary())
        if not rep.passed:
            lines.append("FAILED")
    return lines


def _verify_thm43(args) -> list[str]:
    res = oracle.thm43_counterexample(args.eps)
    ok = res.continuous_avg > 1.0 and 0.0 <= res.idp_avg <= 1.0
    return [res.summary(), "pass" if ok else "FAILED"]


def _verify_transform(args) -> list[str]:
    lines = []
    for system in _verify_systems(args.system):
        for rep in (oracle.check_transform_membership(system, args.samples, args.seed),
                    oracle.check_transform_roundtrip(system,
                                                     max(args.samples // 10, 1000),
                                                     args.seed + 1)):
            lines.append(rep.summary())
            if not rep.passed:
                lines.append("FAILED")
    return lines


def _verify_limiters(args) -> list[str]:
    lines = []
    for system in _verify_systems(args.system):
        rep = oracle.check_limiter_invariants(system, args.samples, args.seed)
        lines.append(rep.summary())
        if not rep.passed:
            lines.append("FAILED")
    return lines


def _verify_sweep(args) -> list[str]:
    cfg = load_config(args.preset)
    scheme = run_mod.build_scheme(cfg)
    system = build_system(cfg)
    sweep = oracle.DomainSweep(system)
    field = run_mod.initial_field(cfg, scheme)
    sweep.check_field(field)
    run_mod.advance(scheme, field, cfg.t_final, cfg.cfl, cfg.integrator,
                    on_stage=sweep.on_stage)
    lines = [f"sweep[{cfg.label}] " + sweep.report.summary()]
    if not sweep.report.is_empty:
        lines.append("FAILED")
    return lines


def cmd_verify(args) -> int:
    suites = {
        "splitting": _verify_splitting,
        "thm43": _verify_thm43,
        "transform": _verify_transform,
        "limiters": _verify_limiters,
        "sweep": _verify_sweep,
    }
    names = list(suites) if args.suite == "all" else [args.suite]
    if any(n not in suites for n in names):
        print(f"unknown suite {args.suite!r}; choices: all, {', '.join(suites)}")
        return 2
    failed = False
    for name in names:
        for line in suites[name](args):
            print(line)
            failed = failed or line == "FAILED"
    print("verification FAILED" if failed else "verification passed")
    return 1 if failed else 0


def cmd_presets(args) -> int:
    for name in preset_names():
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pampa",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a benchmark preset or config file")
    p.add_argument("config")
    p.add_argument("--svg", action="store_true", help="emit SVG plots")
    p.add_argument("--snapshots", type=int, default=None,
                   help="write cell snapshots every K steps")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--oscillation", choices=("none", "oe", "mp"), default=None)
    p.add_argument("--t-final", dest="t_final", type=float, default=None)
    p.add_argument("--integrator", default=None)
    p.add_argument("--cfl", type=float, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("convergence", help="error table over a cell-count ladder")
    p.add_argument("config")
    p.add_argument("--N", required=True, help="comma-separated cell counts")
    p.add_argument("--oscillation", choices=("none", "oe", "mp"), default=None)
    p.add_argument("--integrator", default=None)
    p.add_argument("--cfl", type=float, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_convergence)

    p = sub.add_parser("reference", help="first-order LLF reference run")
    p.add_argument("config")
    p.add_argument("--n", type=int, required=True, help="reference cell count")
    p.add_argument("--cfl", type=float, default=0.45)
    _add_common(p)
    p.set_defaults(fn=cmd_reference)

    p = sub.add_parser("verify", help="run oracle/property verification suites")
    p.add_argument("suite", help="all | splitting | thm43 | transform | limiters | sweep")
    p.add_argument("--system", default="all",
                   help="euler | mhd | burgers | advection | all")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--preset", default="jiang_shu", help="preset for the sweep suite")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("presets", help="list bundled benchmark presets")
    p.set_defaults(fn=cmd_presets)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except PampaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
