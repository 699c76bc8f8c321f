"""The IDP PAMPA spatial operator.

Cell averages evolve in conservative form through numerical fluxes built
from limited one-sided endpoint values; point values evolve the transformed
variables W through an upwinded non-conservative residual that uses the
original node values and the limited midpoints. One `residual` call applies
the full per-stage pipeline: oscillation control (OE or MP), then the
scaling IDP limiter, then flux/residual assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import limiters, mesh, transform
from .errors import ConfigError
from .systems import ScalarLaw


@dataclass
class DofField:
    """Discrete solution: conservative cell averages and transformed point
    values (n points for periodic runs, n+1 otherwise)."""

    avgs: np.ndarray
    points: np.ndarray

    def copy(self) -> "DofField":
        return DofField(self.avgs.copy(), self.points.copy())


@dataclass(frozen=True)
class LimiterConfig:
    idp: bool = True
    oscillation: str = "none"  # none | oe | mp
    mp_alpha: float = 2.0
    mp_beta: float = 4.0
    eps_rho: float = 1e-13
    eps_p: float = 1e-13

    def __post_init__(self):
        if self.oscillation not in ("none", "oe", "mp"):
            raise ConfigError(f"unknown oscillation control {self.oscillation!r}")


# The IDP guarantee for the cell averages needs lambda*dt/dx <= 1/6.
IDP_CFL_LIMIT = 1.0 / 6.0


def llf_flux(system, UL, UR):
    """Local Lax-Friedrichs flux with the pairwise IDP wave speed.

    Exactly consistent: identical inputs give F(U) bit for bit, because
    0.5*(F+F) and the zero jump term introduce no rounding.
    """
    lam = system.pair_speed(UL, UR)
    return 0.5 * (system.flux(UL) + system.flux(UR)) - 0.5 * lam[..., None] * (
        np.asarray(UR, dtype=float) - np.asarray(UL, dtype=float)
    )


class PampaScheme:
    """Spatial discretisation bundle: system + grid + BC + limiter config."""

    def __init__(self, system, grid: mesh.Grid1D, bc: str,
                 limiter: LimiterConfig | None = None):
        mesh.check_bc(bc, system)
        self.system = system
        self.grid = grid
        self.bc = bc
        self.limiter = limiter or LimiterConfig()

    @property
    def n_points(self) -> int:
        n = self.grid.n_cells
        return n if self.bc == mesh.PERIODIC else n + 1

    def check_field(self, field: DofField) -> None:
        n = self.grid.n_cells
        if field.avgs.shape != (n, self.system.nvars):
            raise ConfigError(f"avgs must have shape {(n, self.system.nvars)}")
        if field.points.shape != (self.n_points, self.system.nvars):
            raise ConfigError(
                f"points must have shape {(self.n_points, self.system.nvars)}"
            )

    # -- limiting pipeline -------------------------------------------------

    def interface_states(self, field: DofField, dt: float):
        """Limited triples for cells -1..n (index c+1), plus extended data.

        Returns a dict with hat_l/hat_m/hat_r (n+2, d), theta (n+2,), the
        extended node states, and limiter activity counters.
        """
        sys = self.system
        lim = self.limiter
        n = self.grid.n_cells
        A = mesh.extend_averages(field.avgs, self.bc, sys)       # cells -3..n+2
        Wx = mesh.extend_points(field.points, self.bc, sys)      # nodes -2..n+2
        dxx = mesh.extend_cell_sizes(self.grid, self.bc)
        Ux = transform.from_transformed(sys, Wx)

        cel_a = A[2 : n + 4]                                     # cells -1..n
        u_l = Ux[1 : n + 3]
        u_r = Ux[2 : n + 4]
        theta_oe = None
        mp_changed = 0

        if lim.oscillation == "oe":
            theta_oe = limiters.oe_theta(
                sys, A[1 : n + 5], Ux[0 : n + 4], Ux[1 : n + 5],
                dxx[1 : n + 5], dt,
            )
            u_l, u_m, u_r = limiters.oe_apply(theta_oe, cel_a, u_l, u_r)
        elif lim.oscillation == "mp":
            w_avg = transform.to_transformed(sys, A)
            # left-side values at nodes 0..n+1 (right endpoints of cells -1..n)
            w_left = limiters.mp_limit(
                w_avg[0 : n + 2], w_avg[1 : n + 3], w_avg[2 : n + 4],
                w_avg[3 : n + 5], w_avg[4 : n + 6], Wx[2 : n + 4],
                lim.mp_alpha, lim.mp_beta,
            )
            # right-side values at nodes -1..n (left endpoints of cells -1..n)
            w_right = limiters.mp_limit(
                w_avg[4 : n + 6], w_avg[3 : n + 5], w_avg[2 : n + 4],
                w_avg[1 : n + 3], w_avg[0 : n + 2], Wx[1 : n + 3],
                lim.mp_alpha, lim.mp_beta,
            )
            mp_changed = int(np.count_nonzero(w_right != Wx[1 : n + 3])
                             + np.count_nonzero(w_left != Wx[2 : n + 4]))
            u_l = transform.from_transformed(sys, w_right)
            u_r = transform.from_transformed(sys, w_left)
            u_m = limiters.midpoint_value(cel_a, u_l, u_r)
        else:
            u_m = limiters.midpoint_value(cel_a, u_l, u_r)

        if lim.idp:
            if isinstance(sys, ScalarLaw):
                hat_l, hat_m, hat_r, theta = limiters.scaling_limit_scalar(
                    cel_a[..., 0], u_l[..., 0], u_m[..., 0], u_r[..., 0],
                    sys.u_min, sys.u_max,
                )
                hat_l = hat_l[..., None]
                hat_m = hat_m[..., None]
                hat_r = hat_r[..., None]
            else:
                hat_l, hat_m, hat_r, theta = limiters.scaling_limit_system(
                    sys, cel_a, u_l, u_m, u_r, lim.eps_rho, lim.eps_p,
                )
        else:
            hat_l, hat_m, hat_r = u_l, u_m, u_r
            theta = np.ones(n + 2)

        return {
            "avg_ext": A,
            "w_ext": Wx,
            "u_ext": Ux,
            "dx_ext": dxx,
            "hat_l": hat_l,
            "hat_m": hat_m,
            "hat_r": hat_r,
            "theta": theta,
            "theta_oe": theta_oe,
            "mp_changed": mp_changed,
        }

    # -- residuals ----------------------------------------------------------

    def residual(self, field: DofField, dt: float, record: dict | None = None):
        """Semi-discrete rates (d avgs/dt, d points/dt) for one stage."""
        sys = self.system
        n = self.grid.n_cells
        st = self.interface_states(field, dt)
        hat_l, hat_m, hat_r = st["hat_l"], st["hat_m"], st["hat_r"]

        # interface fluxes at nodes 0..n from one-sided limited states
        fluxes = llf_flux(sys, hat_r[0 : n + 1], hat_l[1 : n + 2])
        davg = -(fluxes[1:] - fluxes[:-1]) / self.grid.cell_sizes[:, None]

        # point residual at owned nodes
        m = self.n_points
        Wx, dxx = st["w_ext"], st["dx_ext"]
        w_prev = Wx[1 : m + 1]
        w_here = Wx[2 : m + 2]
        w_next = Wx[3 : m + 3]
        w_mid = transform.to_transformed(sys, hat_m)
        u_here = st["u_ext"][2 : m + 2]
        # alpha must dominate the node's own spectral radius for the
        # splitting to upwind correctly; the midpoint speeds enter as an
        # enlargement but are capped at twice the largest physical speed in
        # the neighbourhood: a midpoint floored to eps-scale density with a
        # strong transverse field carries an Alfven speed ~ |B|/sqrt(eps)
        # (10 orders above the flow scale), which would otherwise make the
        # point update explode at any practical time step.
        speed_node = sys.max_wave_speed(st["u_ext"])
        speed_avg = sys.max_wave_speed(st["avg_ext"][2 : m + 3])
        neighborhood = np.maximum(
            np.maximum(speed_node[1 : m + 1], speed_node[2 : m + 2]),
            speed_node[3 : m + 3],
        )
        neighborhood = np.maximum(
            neighborhood, np.maximum(speed_avg[0:m], speed_avg[1 : m + 1]))
        cap = 2.0 * neighborhood
        speed_mid = sys.max_wave_speed(hat_m)
        alpha = np.maximum(
            speed_node[2 : m + 2],
            np.maximum(np.minimum(speed_mid[0:m], cap),
                       np.minimum(speed_mid[1 : m + 1], cap)),
        )

        delta_m = -1.5 * w_here + 2.0 * w_mid[1 : m + 1] - 0.5 * w_next
        delta_p = 0.5 * w_prev - 2.0 * w_mid[0:m] + 1.5 * w_here
        jd_m = transform.apply_jacobian(sys, u_here, delta_m)
        jd_p = transform.apply_jacobian(sys, u_here, delta_p)
        a = alpha[:, None]
        phi_m = (jd_m - a * delta_m) / dxx[3 : m + 3, None]
        phi_p = (jd_p + a * delta_p) / dxx[2 : m + 2, None]
        dpts = -(phi_m + phi_p)

        if record is not None:
            theta = st["theta"]
            record["theta"] = theta
            record["mid_hat"] = hat_m[1 : n + 1]
            record["idp_active"] = int(np.count_nonzero(theta < 1.0))
            record["theta_oe"] = st["theta_oe"]
            record["oe_active"] = (
                0 if st["theta_oe"] is None
                else int(np.count_nonzero(st["theta_oe"] < 1.0 - 1e-12))
            )
            record["mp_active"] = st["mp_changed"]
        return davg, dpts

    # -- time-step control ---------------------------------------------------

    def max_dt(self, field: DofField, cfl: float) -> float:
        """CFL time step: cfl * min_j dx_j / lambda_j with lambda_j the
        largest wave speed over the cell average and its endpoint states."""
        if not 0.0 < cfl <= IDP_CFL_LIMIT + 1e-15:
            raise ConfigError(
                f"cfl must lie in (0, 1/6] for the IDP guarantee, got {cfl}"
            )
        sys = self.system
        u_nodes = transform.from_transformed(sys, field.points)
        s_node = sys.max_wave_speed(u_nodes)
        s_right = np.roll(s_node, -1) if self.bc == mesh.PERIODIC else s_node[1:]
        s_left = s_node if self.bc == mesh.PERIODIC else s_node[:-1]
        lam = np.maximum(sys.max_wave_speed(field.avgs),
                         np.maximum(s_left, s_right))
        with np.errstate(divide="ignore"):
            ratios = np.where(lam > 0, self.grid.cell_sizes / np.where(lam > 0, lam, 1.0),
                              np.inf)
        dt = cfl * float(np.min(ratios))
        return dt if math.isfinite(dt) else math.inf

    # -- boundary fix-ups ----------------------------------------------------

    def finish_stage(self, field: DofField) -> DofField:
        """Reflective walls: the boundary node keeps zero normal velocity
        (average of the value and its mirror)."""
        if self.bc != mesh.REFLECTIVE:
            return field
        pts = field.points.copy()
        pts[0] = 0.5 * (pts[0] + self.system.reflect_transformed(pts[0]))
        pts[-1] = 0.5 * (pts[-1] + self.system.reflect_transformed(pts[-1]))
        return DofField(field.avgs, pts)


def continuous_flux_config(limiter: LimiterConfig) -> LimiterConfig:
    """Limiter settings of the original scheme (no IDP stage; with the
    scaling limiter off, identical one-sided states make every interface
    flux reduce to the continuous flux)."""
    return replace(limiter, idp=False)
