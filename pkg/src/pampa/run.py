"""Run driver: initial data, time loop, output files, convergence studies,
and the first-order reference solver."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import mesh, transform
from .config import RunConfig, build_system, limiter_config
from .errors import ConfigError
from .presets import AVERAGE_BUILDERS, EXACT_REGISTRY, IC_REGISTRY
from .scheme import DofField, PampaScheme, llf_flux
from .systems import ScalarLaw
from .timeint import make_integrator

_GAUSS5_X, _GAUSS5_W = np.polynomial.legendre.leggauss(5)


def gauss_cell_averages(f, grid: mesh.Grid1D) -> np.ndarray:
    """Per-cell averages of x -> (d,) states by 5-point Gauss quadrature."""
    ctr = grid.cell_centers[:, None]
    half = 0.5 * grid.cell_sizes[:, None]
    x = ctr + half * _GAUSS5_X[None, :]  # (n, 5)
    vals = f(x)  # (n, 5, d)
    return 0.5 * np.sum(_GAUSS5_W[None, :, None] * vals, axis=1)


def build_scheme(cfg: RunConfig) -> PampaScheme:
    system = build_system(cfg)
    grid = mesh.uniform_grid(cfg.a, cfg.b, cfg.n)
    return PampaScheme(system, grid, cfg.bc, limiter_config(cfg))


def initial_field(cfg: RunConfig, scheme: PampaScheme) -> DofField:
    system, grid = scheme.system, scheme.grid
    ic = IC_REGISTRY[cfg.ic]

    def conserved(x):
        return system.from_primitive(ic(cfg, x))

    builder = AVERAGE_BUILDERS.get(cfg.ic)
    if builder is not None:
        avgs = builder(cfg, system, grid, gauss_cell_averages)
    else:
        avgs = gauss_cell_averages(conserved, grid)
        if isinstance(system, ScalarLaw):
            # quadrature rounding must not push averages past the bounds
            avgs = np.clip(avgs, system.u_min, system.u_max)
    nodes = grid.nodes[: scheme.n_points]
    points = transform.to_transformed(system, conserved(nodes))
    return DofField(avgs=avgs, points=np.atleast_2d(points))


def advance(scheme: PampaScheme, field: DofField, t_final: float,
            cfl: float = 0.1, integrator="ssp_rk3", t0: float = 0.0,
            on_stage=None, on_step=None):
    """Advance to t_final. The step size honours the CFL bound (scaled by
    the integrator's SSP factor) and divides the remaining time evenly, so
    constant-speed multistep runs see a truly constant dt; the final step
    clamps to the remaining time."""
    integ = make_integrator(integrator) if isinstance(integrator, str) else integrator
    t = float(t0)
    step = 0
    eps_t = 1e-12 * max(1.0, abs(t_final))
    dt_frozen = None
    while t < t_final - eps_t:
        remaining = t_final - t
        cfl_dt = scheme.max_dt(field, cfl) * integ.dt_scale
        if integ.multistep and math.isfinite(cfl_dt):
            if dt_frozen is None or cfl_dt < dt_frozen * (1.0 - 1e-12):
                dt_frozen = cfl_dt
            plan = dt_frozen
        else:
            plan = cfl_dt
        plan = min(plan, remaining)
        q = remaining / plan
        m = int(q) if q - int(q) < 1e-9 else int(q) + 1
        dt = remaining / max(m, 1)
        field = integ.step(scheme, field, dt, t=t, step=step, on_stage=on_stage)
        t += dt
        step += 1
        if on_step:
            on_step(t, step, dt, field)
    return field, step, t


# ---------------------------------------------------------------------------
# output files


def conservative_names(system) -> list[str]:
    if isinstance(system, ScalarLaw):
        return ["u"]
    if system.nvars == 3:
        return ["density", "momentum", "energy"]
    return ["density", "mom_x", "mom_y", "mom_z", "b_y", "b_z", "energy"]


def primitive_names(system) -> list[str]:
    if isinstance(system, ScalarLaw):
        return ["u"]
    if system.nvars == 3:
        return ["density", "velocity", "pressure"]
    return ["density", "velocity_x", "velocity_y", "velocity_z", "b_y", "b_z",
            "pressure"]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = np.column_stack(columns)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_cells_csv(path, scheme, field) -> None:
    sys = scheme.system
    prim = sys.primitive(field.avgs)
    cnames = conservative_names(sys)
    pnames = primitive_names(sys)
    header = ["x_center"] + cnames
    cols = [scheme.grid.cell_centers] + [field.avgs[:, k] for k in range(sys.nvars)]
    for k, name in enumerate(pnames):
        if name not in cnames:
            header.append(name)
            cols.append(prim[:, k])
    _write_csv(path, header, cols)


def write_nodes_csv(path, scheme, field) -> None:
    sys = scheme.system
    u = transform.from_transformed(sys, field.points)
    prim = sys.primitive(u)
    nodes = scheme.grid.nodes[: scheme.n_points]
    header = ["x"] + primitive_names(sys)
    _write_csv(path, header, [nodes] + [prim[:, k] for k in range(sys.nvars)])


class DiagnosticsRecorder:
    """Streams one row per step: dt, domain margins, limiter activity, and
    the conserved totals."""

    def __init__(self, scheme: PampaScheme, path):
        self.scheme = scheme
        self.path = Path(path)
        sys = scheme.system
        self.scalar = isinstance(sys, ScalarLaw)
        state_cols = (["min_u", "max_u", "w_min", "w_max"] if self.scalar
                      else ["min_rho", "min_p"])
        totals = [f"total_{name}" for name in conservative_names(sys)]
        self.header = (["step", "t", "dt"] + state_cols
                       + ["theta_min", "idp_active", "oe_active", "mp_active"]
                       + totals)
        self._fh = open(self.path, "w")
        self._fh.write(",".join(self.header) + "\n")
        self._reset()

    def _reset(self):
        self._theta_min = 1.0
        self._idp = 0
        self._oe = 0
        self._mp = 0

    def on_stage(self, t, step, stage, field, record):
        if record and record.get("theta") is not None:
            self._theta_min = min(self._theta_min, float(np.min(record["theta"])))
            self._idp += record.get("idp_active", 0)
            self._oe += record.get("oe_active", 0)
            self._mp += record.get("mp_active", 0)

    def on_step(self, t, step, dt, field):
        sys = self.scheme.system
        u_nodes = transform.from_transformed(sys, field.points)
        totals = np.sum(self.scheme.grid.cell_sizes[:, None] * field.avgs, axis=0)
        if self.scalar:
            u_all = (float(np.min(field.avgs)), float(np.max(field.avgs)),
                     float(np.min(u_nodes)), float(np.max(u_nodes)))
            state = [min(u_all[0], u_all[2]), max(u_all[1], u_all[3]),
                     float(np.min(field.points)), float(np.max(field.points))]
        else:
            p_avg = sys._pressure_quiet(field.avgs)
            p_nod = sys._pressure_quiet(u_nodes)
            state = [min(float(np.min(field.avgs[:, 0])), float(np.min(u_nodes[:, 0]))),
                     min(float(np.min(p_avg)), float(np.min(p_nod)))]
        row = ([step, t, dt] + state
               + [self._theta_min, self._idp, self._oe, self._mp]
               + [float(v) for v in totals])
        self._fh.write(",".join(_fmt(float(v)) for v in row) + "\n")
        self._reset()

    def close(self):
        self._fh.close()


def run_to_files(cfg: RunConfig, outdir, svg: bool = False,
                 snapshot_every: int | None = None, on_stage=None) -> dict:
    """Full benchmark run; writes cells/nodes/diagnostics (+ optional SVG)."""
    cfg = cfg.validate()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    scheme = build_scheme(cfg)
    field = initial_field(cfg, scheme)
    cadence = cfg.snapshot_every if snapshot_every is None else snapshot_every

    diag = DiagnosticsRecorder(scheme, outdir / "diagnostics.csv")
    snap_dir = outdir / "snapshots"

    def on_step(t, step, dt, fld):
        diag.on_step(t, step, dt, fld)
        if cadence and step % cadence == 0:
            snap_dir.mkdir(exist_ok=True)
            write_cells_csv(snap_dir / f"cells_{step:06d}.csv", scheme, fld)

    def stages(t, step, stage, fld, record):
        diag.on_stage(t, step, stage, fld, record)
        if on_stage:
            on_stage(t, step, stage, fld, record)

    try:
        field, n_steps, t_end = advance(scheme, field, cfg.t_final, cfg.cfl,
                                        cfg.integrator, on_stage=stages,
                                        on_step=on_step)
    finally:
        diag.close()

    paths = {
        "cells": outdir / "cells.csv",
        "nodes": outdir / "nodes.csv",
        "diagnostics": outdir / "diagnostics.csv",
        "meta": outdir / "meta.json",
    }
    write_cells_csv(paths["cells"], scheme, field)
    write_nodes_csv(paths["nodes"], scheme, field)
    meta = {"config": asdict(cfg), "n_steps": n_steps, "t_end": t_end,
            "version": "0.1.0"}
    paths["meta"].write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    if svg:
        from .svgplot import write_solution_svgs

        paths["svg"] = write_solution_svgs(outdir, cfg.label, scheme, field)
    paths["field"] = field
    paths["scheme"] = scheme
    return paths


# ---------------------------------------------------------------------------
# first-order local Lax-Friedrichs reference solver

PUBLISHED_REFERENCE_CELLS = {
    "blast_waves": 10000,
    "shu_osher": 300000,
    "mhd_shock_tube": 4000,
    "mhd_leblanc": 10000,
}


def reference_solution(cfg: RunConfig, n_cells: int, cfl: float = 0.45):
    """First-order finite-volume LLF run on n_cells (cell averages only)."""
    cfg = cfg.validate()
    system = build_system(cfg)
    grid = mesh.uniform_grid(cfg.a, cfg.b, n_cells)
    ic = IC_REGISTRY[cfg.ic]

    def conserved(x):
        return system.from_primitive(ic(cfg, x))

    builder = AVERAGE_BUILDERS.get(cfg.ic)
    if builder is not None:
        U = builder(cfg, system, grid, gauss_cell_averages)
    else:
        U = gauss_cell_averages(conserved, grid)
        if isinstance(system, ScalarLaw):
            U = np.clip(U, system.u_min, system.u_max)

    def ghost(U):
        if cfg.bc == mesh.PERIODIC:
            return U[[-1]], U[[0]]
        if cfg.bc == mesh.OUTFLOW:
            return U[[0]], U[[-1]]
        return system.reflect_conserved(U[[0]]), system.reflect_conserved(U[[-1]])

    dx = grid.cell_sizes
    t = 0.0
    eps_t = 1e-12 * max(1.0, cfg.t_final)
    while t < cfg.t_final - eps_t:
        gl, gr = ghost(U)
        ext = np.concatenate([gl, U, gr], axis=0)
        lam = system.max_wave_speed(ext)
        pairmax = np.maximum(lam[:-1], lam[1:])  # interface bounds
        cellmax = np.maximum(pairmax[:-1], pairmax[1:])
        dt = cfl * float(np.min(dx / np.maximum(cellmax, 1e-300)))
        dt = min(dt, cfg.t_final - t)
        F = llf_flux(system, ext[:-1], ext[1:])
        U = U - (dt / dx)[:, None] * (F[1:] - F[:-1])
        t += dt
    return grid.cell_centers, U, system.primitive(U)


def write_reference_csv(cfg: RunConfig, n_cells: int, outdir, cfl: float = 0.45):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    centers, U, prim = reference_solution(cfg, n_cells, cfl)
    system = build_system(cfg)
    path = outdir / "reference.csv"
    header = ["x_center"] + primitive_names(system)
    _write_csv(path, header, [centers] + [prim[:, k] for k in range(system.nvars)])
    meta = {"config": asdict(cfg), "reference_cells": n_cells, "cfl": cfl}
    pub = PUBLISHED_REFERENCE_CELLS.get(cfg.label)
    if pub is not None and pub != n_cells:
        meta["note"] = (f"benchmark-published reference resolution is {pub} cells; "
                        f"this run used {n_cells}")
    (outdir / "reference_meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------------------
# convergence studies


@dataclass
class ConvergenceRow:
    n: int
    err_avg: float
    order_avg: float | None
    err_point: float
    order_point: float | None


def l1_errors(cfg: RunConfig, scheme: PampaScheme, field: DofField,
              component: int = 0) -> tuple[float, float]:
    """Normalised l1 errors of cell averages and point values against the
    exact solution (component 0 = density/u), exact averages by 5-point
    Gauss quadrature."""
    if cfg.exact is None:
        raise ConfigError(f"preset {cfg.label!r} has no exact solution")
    exact = EXACT_REGISTRY[cfg.exact]
    system, grid = scheme.system, scheme.grid

    def conserved(x):
        return system.from_primitive(exact(cfg, x, cfg.t_final))

    avg_ex = gauss_cell_averages(conserved, grid)
    err_avg = float(
        np.sum(np.abs(field.avgs[:, component] - avg_ex[:, component])
               * grid.cell_sizes) / (cfg.b - cfg.a))
    nodes = grid.nodes[: scheme.n_points]
    u_nodes = transform.from_transformed(system, field.points)
    err_pt = float(np.mean(np.abs(u_nodes[:, component]
                                  - conserved(nodes)[:, component])))
    return err_avg, err_pt


def _run_errors(cfg: RunConfig) -> tuple[float, float]:
    scheme = build_scheme(cfg)
    field = initial_field(cfg, scheme)
    field, _, _ = advance(scheme, field, cfg.t_final, cfg.cfl, cfg.integrator)
    return l1_errors(cfg, scheme, field)


def convergence_table(cfg: RunConfig, n_list) -> list[ConvergenceRow]:
    """Errors and observed orders over a cell-count ladder; orders are only
    reported between consecutive doublings."""
    cfgs = [cfg.with_overrides(n=int(n)) for n in n_list]
    workers = int(os.environ.get("PAMPA_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            errors = list(pool.map(_run_errors, cfgs))
    else:
        errors = [_run_errors(c) for c in cfgs]
    rows: list[ConvergenceRow] = []
    for i, (c, (ea, ep)) in enumerate(zip(cfgs, errors)):
        oa = op = None
        if i > 0 and c.n == 2 * cfgs[i - 1].n:
            ea0, ep0 = errors[i - 1]
            if ea0 > 0 and ea > 0:
                oa = math.log2(ea0 / ea)
            if ep0 > 0 and ep > 0:
                op = math.log2(ep0 / ep)
        rows.append(ConvergenceRow(n=c.n, err_avg=ea, order_avg=oa,
                                   err_point=ep, order_point=op))
    return rows


def format_convergence(rows: list[ConvergenceRow]) -> str:
    out = [f"{'N':>6}  {'avg error':>12}  {'order':>6}  {'point error':>12}  {'order':>6}"]
    for r in rows:
        oa = f"{r.order_avg:6.2f}" if r.order_avg is not None else "     -"
        op = f"{r.order_point:6.2f}" if r.order_point is not None else "     -"
        out.append(f"{r.n:>6}  {r.err_avg:12.4e}  {oa}  {r.err_point:12.4e}  {op}")
    return "\n".join(out)


def write_convergence_csv(rows: list[ConvergenceRow], path) -> None:
    with open(path, "w") as fh:
        fh.write("n,err_avg,order_avg,err_point,order_point\n")
        for r in rows:
            oa = _fmt(r.order_avg) if r.order_avg is not None else ""
            op = _fmt(r.order_point) if r.order_point is not None else ""
            fh.write(f"{r.n},{_fmt(r.err_avg)},{oa},{_fmt(r.err_point)},{op}\n")
