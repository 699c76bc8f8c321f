"""Automatic-IDP variable transforms W = Psi(U), inverses, and Jacobians.

The point-value scheme evolves variables chosen so that Psi^{-1}(W) lies in
the invariant domain for every finite W:

* scalar laws: u = (u_max-u_min)*min(ReLU(w), 1) + u_min (clipped ReLU);
* Euler: W = (q, v, s) with q = ln(e^{rho/rho_ref} - 1) (inverse Softplus)
  and s = ln p - gamma*ln rho, so rho = rho_ref*ln(e^q+1) > 0 and
  p = rho^gamma * e^s > 0;
* MHD: W = (q, vx, vy, vz, By, Bz, s) likewise.

Jacobians are for the non-conservative form W_t + J(W) W_x = 0 and are
similar to dF/dU, so their eigenvalues are the physical wave speeds.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .systems import Euler, IdealMHD, ScalarLaw

# exp(x) is safe and the naive expressions are exact to rounding below this
_EXP_SWITCH = 30.0


def softplus(q):
    """ln(1 + e^q), overflow-safe for any finite q."""
    q = np.asarray(q, dtype=float)
    big = q > _EXP_SWITCH
    safe = np.where(big, 0.0, q)
    out = np.log1p(np.exp(safe))
    return np.where(big, q + np.log1p(np.exp(-np.abs(q))), out)


def inv_softplus(x):
    """ln(e^x - 1) for x > 0, overflow-safe."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("inverse Softplus needs a positive argument")
    big = x > _EXP_SWITCH
    safe = np.where(big, 1.0, x)
    out = np.log(np.expm1(safe))
    return np.where(big, x + np.log1p(-np.exp(-x)), out)


def _softplus_deriv_inv(x):
    """1/(1 - e^{-x}) = e^x/(e^x - 1), stable for x > 0."""
    return 1.0 / (-np.expm1(-x))


def to_transformed(system, U):
    """W = Psi(U); requires U strictly inside the invariant domain for systems."""
    U = np.asarray(U, dtype=float)
    if isinstance(system, ScalarLaw):
        return (U - system.u_min) / (system.u_max - system.u_min)
    if isinstance(system, Euler):
        rho = U[..., 0]
        p = system.pressure(U)
        if np.any(p <= 0):
            raise DomainError("transform needs p > 0")
        q = inv_softplus(rho / system.rho_ref)
        s = np.log(p) - system.gamma * np.log(rho)
        return np.stack([q, U[..., 1] / rho, s], axis=-1)
    if isinstance(system, IdealMHD):
        rho = U[..., 0]
        p = system.pressure(U)
        if np.any(p <= 0):
            raise DomainError("transform needs p > 0")
        q = inv_softplus(rho / system.rho_ref)
        s = np.log(p) - system.gamma * np.log(rho)
        v = U[..., 1:4] / rho[..., None]
        return np.stack(
            [q, v[..., 0], v[..., 1], v[..., 2], U[..., 4], U[..., 5], s], axis=-1
        )
    raise TypeError(f"no transform for {type(system).__name__}")


def primitive_from_transformed(system, W):
    """Decode W straight to primitive variables.

    The decoded density (Softplus) and pressure (rho^gamma * e^s) are
    strictly positive floats for any finite W; recovering p from the
    conservative vector instead would bury it under the kinetic-energy
    rounding noise whenever p << E.
    """
    W = np.asarray(W, dtype=float)
    if isinstance(system, ScalarLaw):
        span = system.u_max - system.u_min
        return span * np.clip(W, 0.0, 1.0) + system.u_min
    if isinstance(system, Euler):
        rho = system.rho_ref * softplus(W[..., 0])
        p = np.exp(W[..., 2] + system.gamma * np.log(rho))
        return np.stack([rho, W[..., 1], p], axis=-1)
    if isinstance(system, IdealMHD):
        rho = system.rho_ref * softplus(W[..., 0])
        p = np.exp(W[..., 6] + system.gamma * np.log(rho))
        return np.stack(
            [rho, W[..., 1], W[..., 2], W[..., 3], W[..., 4], W[..., 5], p],
            axis=-1,
        )
    raise TypeError(f"no transform for {type(system).__name__}")


def from_transformed(system, W):
    """U = Psi^{-1}(W); lands in the invariant domain for every finite W."""
    if isinstance(system, ScalarLaw):
        return primitive_from_transformed(system, W)
    return system.from_primitive(primitive_from_transformed(system, W))


def _euler_jacobian(system: Euler, U):
    rho = U[..., 0]
    v = U[..., 1] / rho
    p = system.pressure(U)
    x = rho / system.rho_ref
    # dq/drho = 1/(rho_ref*(1 - e^{-x})); the printed entries are
    # J01 = rho*dq/drho restated, J10 = gamma*p/(rho^2*dq/drho).
    qp = _softplus_deriv_inv(x) / system.rho_ref
    J = np.zeros(U.shape[:-1] + (3, 3))
    J[..., 0, 0] = v
    J[..., 0, 1] = qp * rho
    J[..., 1, 0] = system.gamma * p / (rho * rho * qp)
    J[..., 1, 1] = v
    J[..., 1, 2] = p / rho
    J[..., 2, 2] = v
    return J


def _mhd_jacobian(system: IdealMHD, U):
    # J = T A T^{-1}: A is the quasilinear matrix in primitive variables
    # (rho, vx, vy, vz, By, Bz, p); T = dW/dV is near-diagonal because q
    # depends on rho alone and s on (rho, p).
    rho = U[..., 0]
    vx = U[..., 1] / rho
    vy = U[..., 2] / rho
    vz = U[..., 3] / rho
    By, Bz = U[..., 4], U[..., 5]
    p = system.pressure(U)
    if np.any(p <= 0):
        raise DomainError("Jacobian needs p > 0")
    bx = system.bx
    g = system.gamma
    shp = U.shape[:-1]

    A = np.zeros(shp + (7, 7))
    for i in range(7):
        A[..., i, i] = vx
    A[..., 0, 1] = rho
    A[..., 1, 4] = By / rho
    A[..., 1, 5] = Bz / rho
    A[..., 1, 6] = 1.0 / rho
    A[..., 2, 4] = -bx / rho
    A[..., 3, 5] = -bx / rho
    A[..., 4, 1] = By
    A[..., 4, 2] = -bx
    A[..., 5, 1] = Bz
    A[..., 5, 3] = -bx
    A[..., 6, 1] = g * p

    qp = _softplus_deriv_inv(rho / system.rho_ref) / system.rho_ref
    T = np.zeros(shp + (7, 7))
    Tinv = np.zeros(shp + (7, 7))
    for i in range(1, 6):
        T[..., i, i] = 1.0
        Tinv[..., i, i] = 1.0
    T[..., 0, 0] = qp
    T[..., 6, 0] = -g / rho
    T[..., 6, 6] = 1.0 / p
    Tinv[..., 0, 0] = 1.0 / qp
    Tinv[..., 6, 0] = g * p / (rho * qp)
    Tinv[..., 6, 6] = p
    return T @ (A @ Tinv)


def jacobian_transformed(system, U):
    """Jacobian of the W-variable quasilinear form at the state U (in G)."""
    U = np.asarray(U, dtype=float)
    if isinstance(system, ScalarLaw):
        u = from_transformed(system, to_transformed(system, U))
        return system.dflux_fn(u[..., 0])[..., None, None]
    if isinstance(system, Euler):
        return _euler_jacobian(system, U)
    if isinstance(system, IdealMHD):
        return _mhd_jacobian(system, U)
    raise TypeError(f"no Jacobian for {type(system).__name__}")


def apply_jacobian(system, U, vec):
    """J(U) @ vec without materialising the matrices (hot path)."""
    U = np.asarray(U, dtype=float)
    vec = np.asarray(vec, dtype=float)
    if isinstance(system, ScalarLaw):
        u = from_transformed(system, to_transformed(system, U))
        return system.dflux_fn(u[..., 0])[..., None] * vec
    if isinstance(system, Euler):
        rho = U[..., 0]
        v = U[..., 1] / rho
        p = system.pressure(U)
        qp = _softplus_deriv_inv(rho / system.rho_ref) / system.rho_ref
        g = system.gamma
        y0 = v * vec[..., 0] + qp * rho * vec[..., 1]
        y1 = (g * p / (rho * rho * qp)) * vec[..., 0] + v * vec[..., 1] \
            + (p / rho) * vec[..., 2]
        y2 = v * vec[..., 2]
        return np.stack([y0, y1, y2], axis=-1)
    if isinstance(system, IdealMHD):
        rho = U[..., 0]
        vx = U[..., 1] / rho
        By, Bz = U[..., 4], U[..., 5]
        p = system.pressure(U)
        qp = _softplus_deriv_inv(rho / system.rho_ref) / system.rho_ref
        g = system.gamma
        bx = system.bx
        # Tinv: W-perturbation -> primitive perturbation
        d_rho = vec[..., 0] / qp
        d_p = (g * p / rho) * d_rho + p * vec[..., 6]
        dvx, dvy, dvz = vec[..., 1], vec[..., 2], vec[..., 3]
        dBy, dBz = vec[..., 4], vec[..., 5]
        # primitive quasilinear action A @ dV
        r0 = vx * d_rho + rho * dvx
        r1 = vx * dvx + (By * dBy + Bz * dBz + d_p) / rho
        r2 = vx * dvy - (bx / rho) * dBy
        r3 = vx * dvz - (bx / rho) * dBz
        r4 = By * dvx - bx * dvy + vx * dBy
        r5 = Bz * dvx - bx * dvz + vx * dBz
        r6 = g * p * dvx + vx * d_p
        # T: primitive perturbation -> W-perturbation
        return np.stack([qp * r0, r1, r2, r3, r4, r5,
                         -(g / rho) * r0 + r6 / p], axis=-1)
    raise TypeError(f"no Jacobian for {type(system).__name__}")


def spectral_radius(system, U):
    """Upper bound on |eigenvalues| of the transformed Jacobian at U."""
    return system.max_wave_speed(U)
