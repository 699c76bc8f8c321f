"""Equation systems: linear advection, Burgers, compressible Euler, ideal MHD.

Each system provides the algebraic flux, pointwise and pairwise wave-speed
estimates, the invariant-domain predicate, and primitive<->conservative
converters. States are arrays whose last axis holds the d components, so
every operation works on a single state or a whole field at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class ScalarBounds:
    """Invariant interval G = [u_min, u_max] of a scalar law."""

    u_min: float
    u_max: float


@dataclass(frozen=True)
class PositivityFloors:
    """Positivity floors for density and pressure (0 = plain positivity)."""

    eps_rho: float = 0.0
    eps_p: float = 0.0


def _finite(U):
    return np.all(np.isfinite(U), axis=-1)


class ScalarLaw:
    """Scalar conservation law u_t + f(u)_x = 0 with invariant interval G."""

    nvars = 1

    def __init__(self, flux_fn: Callable, dflux_fn: Callable, u_min: float,
                 u_max: float, name: str = "scalar"):
        if not u_min < u_max:
            raise DomainError(f"need u_min < u_max, got [{u_min}, {u_max}]")
        self.flux_fn = flux_fn
        self.dflux_fn = dflux_fn
        self.u_min = float(u_min)
        self.u_max = float(u_max)
        self.name = name

    def domain_spec(self) -> ScalarBounds:
        return ScalarBounds(self.u_min, self.u_max)

    def flux(self, U):
        U = np.asarray(U, dtype=float)
        return self.flux_fn(U[..., 0])[..., None]

    def max_wave_speed(self, U):
        U = np.asarray(U, dtype=float)
        return np.abs(self.dflux_fn(U[..., 0]))

    def wave_speed_range(self, U):
        U = np.asarray(U, dtype=float)
        s = self.dflux_fn(U[..., 0])
        return s, s

    def pair_speed(self, UL, UR):
        return np.maximum(self.max_wave_speed(UL), self.max_wave_speed(UR))

    def in_domain(self, U, spec: ScalarBounds | None = None):
        spec = spec or self.domain_spec()
        U = np.asarray(U, dtype=float)
        u = U[..., 0]
        with np.errstate(invalid="ignore"):
            ok = (u >= spec.u_min) & (u <= spec.u_max)
        return ok & _finite(U)

    def domain_margin(self, U, spec: ScalarBounds | None = None):
        spec = spec or self.domain_spec()
        u = np.asarray(U, dtype=float)[..., 0]
        return np.minimum(u - spec.u_min, spec.u_max - u)

    def primitive(self, U):
        return np.asarray(U, dtype=float)

    def from_primitive(self, prim):
        return np.asarray(prim, dtype=float)


def advection(u_min: float, u_max: float) -> ScalarLaw:
    """u_t + u_x = 0 (unit transport speed)."""
    return ScalarLaw(lambda u: u, lambda u: np.ones_like(u), u_min, u_max,
                     name="advection")


def burgers(u_min: float, u_max: float) -> ScalarLaw:
    """u_t + (u^2/2)_x = 0."""
    return ScalarLaw(lambda u: 0.5 * u * u, lambda u: u, u_min, u_max,
                     name="burgers")


class Euler:
    """1D compressible Euler equations, U = (rho, rho*v, E)."""

    nvars = 3

    def __init__(self, gamma: float = 1.4, rho_ref: float = 1.0):
        self.gamma = float(gamma)
        self.rho_ref = float(rho_ref)
        self.name = "euler"

    def domain_spec(self) -> PositivityFloors:
        return PositivityFloors()

    def pressure(self, U):
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        if np.any(rho <= 0) or not np.all(np.isfinite(rho)):
            raise DomainError("pressure recovery needs rho > 0")
        return (self.gamma - 1.0) * (U[..., 2] - 0.5 * U[..., 1] ** 2 / rho)

    def _pressure_quiet(self, U):
        U = np.asarray(U, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.gamma - 1.0) * (U[..., 2] - 0.5 * U[..., 1] ** 2 / U[..., 0])

    def sound_speed(self, U):
        U = np.asarray(U, dtype=float)
        p = np.maximum(self.pressure(U), 0.0)
        return np.sqrt(self.gamma * p / U[..., 0])

    def flux(self, U):
        U = np.asarray(U, dtype=float)
        p = self.pressure(U)
        if not np.all(np.isfinite(p)):
            raise DomainError("non-finite pressure in flux evaluation")
        rho, mom, E = U[..., 0], U[..., 1], U[..., 2]
        v = mom / rho
        return np.stack([mom, mom * v + p, v * (E + p)], axis=-1)

    def max_wave_speed(self, U):
        U = np.asarray(U, dtype=float)
        return np.abs(U[..., 1] / U[..., 0]) + self.sound_speed(U)

    def wave_speed_range(self, U):
        U = np.asarray(U, dtype=float)
        v = U[..., 1] / U[..., 0]
        c = self.sound_speed(U)
        return v - c, v + c

    def pair_speed(self, UL, UR):
        return np.maximum(self.max_wave_speed(UL), self.max_wave_speed(UR))

    def in_domain(self, U, spec: PositivityFloors | None = None):
        spec = spec or PositivityFloors()
        U = np.asarray(U, dtype=float)
        p = self._pressure_quiet(U)
        with np.errstate(invalid="ignore"):
            ok = (U[..., 0] > spec.eps_rho) & (p > spec.eps_p)
        return ok & _finite(U) & np.isfinite(p)

    def domain_margin(self, U, spec: PositivityFloors | None = None):
        spec = spec or PositivityFloors()
        U = np.asarray(U, dtype=float)
        p = self._pressure_quiet(U)
        return np.minimum(U[..., 0] - spec.eps_rho, p - spec.eps_p)

    def primitive(self, U):
        U = np.asarray(U, dtype=float)
        v = U[..., 1] / U[..., 0]
        return np.stack([U[..., 0], v, self._pressure_quiet(U)], axis=-1)

    def from_primitive(self, prim):
        prim = np.asarray(prim, dtype=float)
        rho, v, p = prim[..., 0], prim[..., 1], prim[..., 2]
        E = p / (self.gamma - 1.0) + 0.5 * rho * v * v
        return np.stack([rho, rho * v, E], axis=-1)

    def reflect_conserved(self, U):
        return np.asarray(U, dtype=float) * np.array([1.0, -1.0, 1.0])

    def reflect_transformed(self, W):
        return np.asarray(W, dtype=float) * np.array([1.0, -1.0, 1.0])


class IdealMHD:
    """1D ideal MHD, U = (rho, rho*vx, rho*vy, rho*vz, By, Bz, E); Bx constant."""

    nvars = 7

    def __init__(self, gamma: float = 5.0 / 3.0, bx: float = 0.0,
                 rho_ref: float = 1.0):
        self.gamma = float(gamma)
        self.bx = float(bx)
        self.rho_ref = float(rho_ref)
        self.name = "mhd"

    def domain_spec(self) -> PositivityFloors:
        return PositivityFloors()

    def _split(self, U):
        rho = U[..., 0]
        v = U[..., 1:4] / rho[..., None]
        By, Bz, E = U[..., 4], U[..., 5], U[..., 6]
        return rho, v, By, Bz, E

    def _b_squared(self, U):
        return self.bx ** 2 + U[..., 4] ** 2 + U[..., 5] ** 2

    def pressure(self, U):
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        if np.any(rho <= 0) or not np.all(np.isfinite(rho)):
            raise DomainError("pressure recovery needs rho > 0")
        kin = 0.5 * np.sum(U[..., 1:4] ** 2, axis=-1) / rho
        return (self.gamma - 1.0) * (U[..., 6] - kin - 0.5 * self._b_squared(U))

    def _pressure_quiet(self, U):
        U = np.asarray(U, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            kin = 0.5 * np.sum(U[..., 1:4] ** 2, axis=-1) / U[..., 0]
            return (self.gamma - 1.0) * (U[..., 6] - kin - 0.5 * self._b_squared(U))

    def fast_speed(self, U):
        """Fast magnetoacoustic speed c_f for propagation along x."""
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        p = np.maximum(self.pressure(U), 0.0)
        a = (self.gamma * p + self._b_squared(U)) / rho
        disc = np.maximum(a * a - 4.0 * self.gamma * p * self.bx ** 2 / rho ** 2, 0.0)
        return np.sqrt(0.5 * (a + np.sqrt(disc)))

    def flux(self, U):
        U = np.asarray(U, dtype=float)
        p = self.pressure(U)
        if not np.all(np.isfinite(p)):
            raise DomainError("non-finite pressure in flux evaluation")
        rho, v, By, Bz, E = self._split(U)
        vx, vy, vz = v[..., 0], v[..., 1], v[..., 2]
        bx = self.bx
        ptot = p + 0.5 * self._b_squared(U)
        bdotv = bx * vx + By * vy + Bz * vz
        return np.stack(
            [
                rho * vx,
                rho * vx * vx + ptot - bx * bx,
                rho * vx * vy - bx * By,
                rho * vx * vz - bx * Bz,
                By * vx - bx * vy,
                Bz * vx - bx * vz,
                (E + ptot) * vx - bx * bdotv,
            ],
            axis=-1,
        )

    def max_wave_speed(self, U):
        U = np.asarray(U, dtype=float)
        vx = U[..., 1] / U[..., 0]
        return np.abs(vx) + self.fast_speed(U)

    def wave_speed_range(self, U):
        U = np.asarray(U, dtype=float)
        vx = U[..., 1] / U[..., 0]
        cf = self.fast_speed(U)
        return vx - cf, vx + cf

    def pair_speed(self, UL, UR):
        UL = np.asarray(UL, dtype=float)
        UR = np.asarray(UR, dtype=float)
        sl = np.sqrt(UL[..., 0])
        sr = np.sqrt(UR[..., 0])
        vxl = UL[..., 1] / UL[..., 0]
        vxr = UR[..., 1] / UR[..., 0]
        cfl = self.fast_speed(UL)
        cfr = self.fast_speed(UR)
        # |v_roe|: the signed Roe average suppresses the third candidate
        # when both states move the same way, and sampled pairs with fast
        # common motion then violate the splitting property
        v_roe = np.abs(sl * vxl + sr * vxr) / (sl + sr)
        base = np.maximum(
            np.maximum(np.abs(vxl) + cfl, np.abs(vxr) + cfr),
            v_roe + np.maximum(cfl, cfr),
        )
        db = np.sqrt(
            (UL[..., 4] - UR[..., 4]) ** 2 + (UL[..., 5] - UR[..., 5]) ** 2
        )
        return base + db / (sl + sr)

    def in_domain(self, U, spec: PositivityFloors | None = None):
        spec = spec or PositivityFloors()
        U = np.asarray(U, dtype=float)
        p = self._pressure_quiet(U)
        with np.errstate(invalid="ignore"):
            ok = (U[..., 0] > spec.eps_rho) & (p > spec.eps_p)
        return ok & _finite(U) & np.isfinite(p)

    def domain_margin(self, U, spec: PositivityFloors | None = None):
        spec = spec or PositivityFloors()
        U = np.asarray(U, dtype=float)
        p = self._pressure_quiet(U)
        return np.minimum(U[..., 0] - spec.eps_rho, p - spec.eps_p)

    def primitive(self, U):
        """(rho, vx, vy, vz, By, Bz, p)."""
        U = np.asarray(U, dtype=float)
        rho, v, By, Bz, _ = self._split(U)
        return np.stack(
            [rho, v[..., 0], v[..., 1], v[..., 2], By, Bz, self._pressure_quiet(U)],
            axis=-1,
        )

    def from_primitive(self, prim):
        prim = np.asarray(prim, dtype=float)
        rho = prim[..., 0]
        v = prim[..., 1:4]
        By, Bz, p = prim[..., 4], prim[..., 5], prim[..., 6]
        b2 = self.bx ** 2 + By ** 2 + Bz ** 2
        E = p / (self.gamma - 1.0) + 0.5 * rho * np.sum(v * v, axis=-1) + 0.5 * b2
        return np.stack(
            [rho, rho * v[..., 0], rho * v[..., 1], rho * v[..., 2], By, Bz, E],
            axis=-1,
        )

    def reflect_conserved(self, U):
        return np.asarray(U, dtype=float) * np.array([1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0])

    def reflect_transformed(self, W):
        return np.asarray(W, dtype=float) * np.array([1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0])
